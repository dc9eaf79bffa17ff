//! Populations and entanglement while the pulse is on, θ = π/6.
//!
//! cargo run --release --example population_dynamics [exact]

use std::f64::consts::PI;

use pulsedistill::dynamics::{linear_grid, trace_evolution};
use pulsedistill::{Engine, SystemParams};

fn main() -> pulsedistill::Result<()> {
    let engine = match std::env::args().nth(1).as_deref() {
        Some("exact") => Engine::Exact,
        _ => Engine::Rwa,
    };
    let p = SystemParams::default().with_theta(PI / 6.0);
    let grid = linear_grid(2.0 * PI, 17);
    let times: Vec<f64> = grid.iter().map(|x| x / p.g).collect();
    let trace = trace_evolution(&p, &times, engine, None)?;

    println!("engine: {engine:?}");
    println!("{:>7} {:>8} {:>8} {:>8} {:>8} {:>8}", "gt", "P00dd", "P00uu", "P01uu", "C", "C'");
    for (k, x) in grid.iter().enumerate() {
        let [dd, uu, ud] = trace.populations[k];
        println!(
            "{x:>7.3} {dd:>8.4} {uu:>8.4} {ud:>8.4} {:>8.4} {:>8.4}",
            trace.concurrence[k], trace.conditional_concurrence[k]
        );
    }
    Ok(())
}
