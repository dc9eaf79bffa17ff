//! A handful of pairs run through pulse, measurement and post-selection.
//!
//! cargo run --example single_pair_distillation

use std::f64::consts::PI;

use pulsedistill::protocol::{pair_rng, plan, run_single_pair, PairOptions};
use pulsedistill::{BandOutcome, SystemParams};

fn main() -> pulsedistill::Result<()> {
    let p = SystemParams::default().with_theta(PI / 6.0);
    let pl = plan(p.theta, p.g)?;
    println!(
        "theta = pi/6, initial C = {:.4}, pulse gt* = {:.4}, P(band 0) = {:.4}",
        (2.0 * p.theta).sin(),
        p.g * pl.t_star,
        pl.success_probability
    );

    let opts = PairOptions::default();
    let mut kept = 0;
    for i in 0..10 {
        let rec = run_single_pair(&p, pl.t_star, &opts, &mut pair_rng(2024, i))?;
        let verdict = match rec.outcome {
            BandOutcome::Band0 => {
                kept += 1;
                "keep"
            }
            BandOutcome::Band1 => "discard",
        };
        println!(
            "pair {i}: {} (p = {:.3}), spin concurrence {:.6} -> {verdict}",
            rec.outcome, rec.probability, rec.post_concurrence
        );
    }
    println!("{kept} of 10 pairs kept as Bell pairs");
    Ok(())
}
