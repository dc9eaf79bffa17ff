//! Monte Carlo yield of maximally entangled pairs against 2 sin²θ and tan θ.
//!
//! cargo run --release --example ensemble_efficiency [n_pairs]

use std::f64::consts::PI;

use pulsedistill::protocol::{efficiency, plan, run_planned};
use pulsedistill::{Engine, SystemParams};

fn main() -> pulsedistill::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let p = SystemParams::default();
    println!("{:>8} {:>8} {:>10} {:>10} {:>9} {:>8}", "theta/pi", "C", "c_bar", "2sin^2", "C_bar/C", "tan");
    for theta in [PI / 12.0, PI / 8.0, PI / 6.0, PI / 5.0, PI / 4.0] {
        let stats = run_planned(&p, &plan(theta, p.g)?, n, 42, Engine::Rwa)?;
        let c0 = (2.0 * theta).sin();
        println!(
            "{:>8.4} {c0:>8.4} {:>10.5} {:>10.5} {:>9.4} {:>8.4}",
            theta / PI,
            stats.c_bar,
            2.0 * theta.sin().powi(2),
            stats.c_bar / c0,
            efficiency(theta)?
        );
    }
    Ok(())
}
