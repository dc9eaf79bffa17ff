//! How far the closed-form solution drifts from the full 16-dim evolution.
//!
//! cargo run --release --example rwa_vs_exact

use std::f64::consts::PI;

use pulsedistill::dynamics::{evolve_states, linear_grid, tracked_populations};
use pulsedistill::model::rwa_validity;
use pulsedistill::{Engine, SystemParams};

fn main() -> pulsedistill::Result<()> {
    println!("{:>6} {:>8} {:>12} {:>12}", "g/J", "eta34", "max error", "0.25/(1+eta^2)");
    for ratio in [0.4, 0.2, 0.1, 0.05] {
        let base = SystemParams::default();
        let p = base.with_g(ratio * base.j);
        let times: Vec<f64> = linear_grid(PI, 201).iter().map(|x| x / p.g).collect();
        let rwa = evolve_states(&p, &times, Engine::Rwa, None)?;
        let exact = evolve_states(&p, &times, Engine::Exact, None)?;
        let err = rwa
            .iter()
            .zip(&exact)
            .flat_map(|(a, b)| {
                let (a, b) = (tracked_populations(a), tracked_populations(b));
                (0..3).map(move |i| (a[i] - b[i]).abs())
            })
            .fold(0.0, f64::max);
        let eta = rwa_validity(&p)?.eta34;
        println!("{ratio:>6} {eta:>8.1} {err:>12.3e} {:>12.3e}", 0.25 / (1.0 + eta * eta));
    }
    Ok(())
}
