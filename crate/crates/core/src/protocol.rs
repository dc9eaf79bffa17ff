//! The single-pair distillation procedure and its N-pair statistics.
//!
//! Bob drives particle B for a time `t*` with `cos(g t*) = tanθ`, measures
//! B's band, and reports the outcome to Alice. A band-0 result leaves the
//! spins maximally entangled; band 1 leaves a product state. Over N pairs the
//! yield is `C̄ = N'/N → 2 sin²θ`, so the efficiency `C̄ / sin 2θ` is `tanθ`.
//!
//! Every pair draws from its own ChaCha stream keyed by `(seed, pair index)`,
//! so ensembles are reproducible regardless of how work is split across threads.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{
    default_step, exact_propagate, initial_state, rwa_state_for, Engine, Transition,
};
use crate::entanglement::{band_probability, project_band_b, BandOutcome, MeasurementRecord, Particle};
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::qmath::StateVector;

/// A band-0 outcome counts as maximally entangled above `1 - MAX_ENTANGLED_TOL`.
pub const MAX_ENTANGLED_TOL: f64 = 1e-9;

// Slack so that θ = π/4 computed in floating point is inside the regime.
const BOUNDARY_SLACK: f64 = 1e-15;

/// Optimal pulse settings for one initial angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistillationPlan {
    pub theta: f64,
    pub g: f64,
    /// Pulse duration giving a maximally entangled band-0 outcome.
    pub t_star: f64,
    /// Probability of the band-0 outcome at `t_star`.
    pub success_probability: f64,
    /// Expected yield `N'/N`; equals `success_probability`.
    pub expected_c_bar: f64,
    pub transition: Transition,
}

fn check_pulse(g: f64) -> Result<()> {
    if !(g > 0.0) || !g.is_finite() {
        return Err(Error::Domain(format!("g must be positive, got {g}")));
    }
    Ok(())
}

/// Smallest positive `t` with `cos(g t) = tanθ`, for `θ ∈ (0, π/4]`.
pub fn optimal_pulse_time(theta: f64, g: f64) -> Result<f64> {
    check_pulse(g)?;
    if !(theta > 0.0 && theta <= FRAC_PI_4 + BOUNDARY_SLACK) {
        return Err(Error::OutOfRegime(format!(
            "theta = {theta} is outside (0, pi/4]; for theta > pi/4 use the mirrored protocol"
        )));
    }
    Ok(theta.tan().min(1.0).acos() / g)
}

/// Pulse time for the mirrored protocol, `cos(g t) = cotθ`, for `θ ∈ [π/4, π/2)`.
pub fn mirrored_optimal_pulse_time(theta: f64, g: f64) -> Result<f64> {
    check_pulse(g)?;
    if !(theta >= FRAC_PI_4 - BOUNDARY_SLACK && theta < FRAC_PI_2) {
        return Err(Error::OutOfRegime(format!(
            "theta = {theta} is outside [pi/4, pi/2) for the mirrored protocol"
        )));
    }
    Ok((1.0 / theta.tan()).min(1.0).acos() / g)
}

/// Plan for the standard protocol (drive the ↑ transition).
pub fn plan(theta: f64, g: f64) -> Result<DistillationPlan> {
    let t_star = optimal_pulse_time(theta, g)?;
    let p = 2.0 * theta.sin().powi(2);
    Ok(DistillationPlan {
        theta,
        g,
        t_star,
        success_probability: p,
        expected_c_bar: p,
        transition: Transition::SpinUp,
    })
}

/// Plan for the mirrored protocol (drive the ↓ transition), yield `2 cos²θ`.
pub fn mirrored_plan(theta: f64, g: f64) -> Result<DistillationPlan> {
    let t_star = mirrored_optimal_pulse_time(theta, g)?;
    let p = 2.0 * theta.cos().powi(2);
    Ok(DistillationPlan {
        theta,
        g,
        t_star,
        success_probability: p,
        expected_c_bar: p,
        transition: Transition::SpinDown,
    })
}

/// `R = C̄ / C = tanθ` on `(0, π/4]`.
pub fn efficiency(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= FRAC_PI_4 + BOUNDARY_SLACK) {
        return Err(Error::OutOfRegime(format!(
            "efficiency is defined on (0, pi/4], got {theta}"
        )));
    }
    Ok(theta.tan().min(1.0))
}

/// Mirrored-protocol efficiency `2cos²θ / sin 2θ = cotθ` on `[π/4, π/2)`.
pub fn mirrored_efficiency(theta: f64) -> Result<f64> {
    if !(theta >= FRAC_PI_4 - BOUNDARY_SLACK && theta < FRAC_PI_2) {
        return Err(Error::OutOfRegime(format!(
            "mirrored efficiency is defined on [pi/4, pi/2), got {theta}"
        )));
    }
    Ok((1.0 / theta.tan()).min(1.0))
}

/// How each pair is evolved before the measurement.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PairOptions {
    pub engine: Engine,
    pub transition: Transition,
    /// Exact-engine step; `None` uses [`default_step`].
    pub dt: Option<f64>,
}

/// Random stream for pair `index` of an ensemble seeded with `seed`.
pub fn pair_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// The shared two-particle state just before Bob's measurement.
pub fn pre_measurement_state(p: &SystemParams, t: f64, opts: &PairOptions) -> Result<StateVector> {
    p.validate()?;
    match opts.engine {
        Engine::Rwa => rwa_state_for(p, t, opts.transition),
        Engine::Exact => {
            let psi0 = initial_state(p.theta)?;
            exact_propagate(p, &psi0, t, opts.dt.unwrap_or_else(|| default_step(p)))
        }
    }
}

fn sample_outcome(prob_band0: f64, rng: &mut impl Rng) -> BandOutcome {
    if rng.gen::<f64>() < prob_band0 {
        BandOutcome::Band0
    } else {
        BandOutcome::Band1
    }
}

/// Runs the three steps for one pair: pulse for time `t`, measure B's band, report.
pub fn run_single_pair(
    p: &SystemParams,
    t: f64,
    opts: &PairOptions,
    rng: &mut impl Rng,
) -> Result<MeasurementRecord> {
    let psi = pre_measurement_state(p, t, opts)?;
    let p0 = band_probability(&psi, Particle::B, BandOutcome::Band0);
    project_band_b(&psi, sample_outcome(p0, rng))
}

/// Counts from an N-pair run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub n_pairs: u64,
    /// Pairs whose measurement returned band 0.
    pub n_success: u64,
    /// Band-0 pairs whose spins ended maximally entangled.
    pub n_maximal: u64,
    /// `n_success / n_pairs`.
    pub c_bar: f64,
    /// `sqrt(ĉ (1 - ĉ) / N)`.
    pub std_error: f64,
    /// Average concurrence over band-0 pairs (0 if there were none).
    pub mean_conditional_concurrence: f64,
    /// Born probability of band 0 for this state.
    pub band0_probability: f64,
    pub seed: u64,
}

/// Runs `n_pairs` independent pairs with pulse duration `t`.
///
/// All pairs share the same pre-measurement state, so the two possible
/// post-measurement records are computed once; each pair only draws its outcome.
/// The result equals calling [`run_single_pair`] with `pair_rng(seed, i)` for
/// every `i`.
pub fn run_ensemble(
    p: &SystemParams,
    t: f64,
    n_pairs: u64,
    seed: u64,
    opts: &PairOptions,
) -> Result<EnsembleStats> {
    if n_pairs == 0 {
        return Err(Error::Domain("n_pairs must be at least 1".into()));
    }
    let psi = pre_measurement_state(p, t, opts)?;
    let p0 = band_probability(&psi, Particle::B, BandOutcome::Band0);
    let band0 = match project_band_b(&psi, BandOutcome::Band0) {
        Ok(rec) => Some(rec),
        Err(Error::ZeroProbability { .. }) => None,
        Err(e) => return Err(e),
    };

    let n_success = (0..n_pairs)
        .into_par_iter()
        .filter(|&i| sample_outcome(p0, &mut pair_rng(seed, i)) == BandOutcome::Band0)
        .count() as u64;
    if n_success > 0 && band0.is_none() {
        return Err(Error::Numerical("sampled an impossible outcome".into()));
    }

    let post_c = band0.as_ref().map_or(0.0, |r| r.post_concurrence);
    let n_maximal = if post_c >= 1.0 - MAX_ENTANGLED_TOL {
        n_success
    } else {
        0
    };
    let c_bar = n_success as f64 / n_pairs as f64;
    Ok(EnsembleStats {
        n_pairs,
        n_success,
        n_maximal,
        c_bar,
        std_error: (c_bar * (1.0 - c_bar) / n_pairs as f64).sqrt(),
        mean_conditional_concurrence: if n_success > 0 { post_c } else { 0.0 },
        band0_probability: p0,
        seed,
    })
}

/// Ensemble at the optimal pulse time of `plan`.
///
/// Fails with a numerical error if a band-0 outcome is not maximally entangled.
pub fn run_planned(
    p: &SystemParams,
    plan: &DistillationPlan,
    n_pairs: u64,
    seed: u64,
    engine: Engine,
) -> Result<EnsembleStats> {
    let params = p.with_theta(plan.theta).with_g(plan.g).with_omega(plan.transition.frequency(p));
    let opts = PairOptions {
        engine,
        transition: plan.transition,
        dt: None,
    };
    let stats = run_ensemble(&params, plan.t_star, n_pairs, seed, &opts)?;
    if stats.n_success != stats.n_maximal {
        return Err(Error::Numerical(format!(
            "band-0 concurrence at t* fell below 1 - {MAX_ENTANGLED_TOL:e} (got {})",
            stats.mean_conditional_concurrence
        )));
    }
    Ok(stats)
}

/// One row of a θ sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub c_initial: f64,
    pub c_bar_analytic: f64,
    pub c_bar_mc: f64,
    pub std_error: f64,
    pub efficiency: f64,
    pub mirrored: bool,
}

/// Seed for row `k` of a sweep.
pub fn row_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Initial concurrence, analytic and sampled yield, and efficiency over a θ grid.
///
/// Angles above π/4 are rejected unless `mirror` is set, in which case they use
/// the ↓-transition protocol.
pub fn sweep_theta(
    thetas: &[f64],
    p: &SystemParams,
    n_pairs: u64,
    seed: u64,
    mirror: bool,
) -> Result<Vec<SweepRow>> {
    thetas
        .iter()
        .enumerate()
        .map(|(k, &theta)| {
            let use_mirror = mirror && theta > FRAC_PI_4 + BOUNDARY_SLACK;
            let (plan, eff) = if use_mirror {
                (mirrored_plan(theta, p.g)?, mirrored_efficiency(theta)?)
            } else {
                (plan(theta, p.g)?, efficiency(theta)?)
            };
            let stats = run_planned(p, &plan, n_pairs, row_seed(seed, k), Engine::Rwa)?;
            Ok(SweepRow {
                theta,
                c_initial: (2.0 * theta).sin(),
                c_bar_analytic: plan.expected_c_bar,
                c_bar_mc: stats.c_bar,
                std_error: stats.std_error,
                efficiency: eff,
                mirrored: use_mirror,
            })
        })
        .collect()
}
