//! Time evolution of the two-particle state.
//!
//! Two engines: the closed-form rotating-wave solution, which keeps only the
//! resonant `|0↑⟩_B ↔ |1↑⟩_B` transition, and an exact integrator of the full
//! 16-dimensional Schrödinger equation using midpoint exponential steps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entanglement::{concurrence, conditional_concurrence_of_state, reduced_spin_density};
use crate::error::{Error, Result};
use crate::model::{
    local_index, local_spectrum, mirrored_resonance_frequency, pair_index, resonance_frequency,
    total_hamiltonian, total_hamiltonian_max_entry, SystemParams, PAIR_DIM,
};
use crate::qmath::{propagator, StateVector, NORM_TOL, ZERO};

/// Largest allowed `dt * max|H_ij|` for the exact engine.
pub const STEP_GUARD: f64 = 0.05;

/// Tolerance used when checking that ω sits exactly on a resonance.
pub const RESONANCE_TOL: f64 = 1e-12;

/// `|0↑⟩_A |0↑⟩_B`
pub const IDX_00_UU: usize = pair_index(local_index(0, false), local_index(0, false));
/// `|0↑⟩_A |1↑⟩_B`
pub const IDX_01_UU: usize = pair_index(local_index(0, false), local_index(1, false));
/// `|0↓⟩_A |0↓⟩_B`
pub const IDX_00_DD: usize = pair_index(local_index(0, true), local_index(0, true));
/// `|0↓⟩_A |1↓⟩_B`, populated only when the ↓ transition is driven.
pub const IDX_01_DD: usize = pair_index(local_index(0, true), local_index(1, true));

/// Which band transition of particle B the pulse is tuned to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transition {
    /// `|0↑⟩ ↔ |1↑⟩` at `ω = 2ω_b - 2J`.
    #[default]
    SpinUp,
    /// `|0↓⟩ ↔ |1↓⟩` at `ω = 2ω_b + 2J`.
    SpinDown,
}

impl Transition {
    pub fn frequency(self, p: &SystemParams) -> f64 {
        match self {
            Transition::SpinUp => resonance_frequency(p),
            Transition::SpinDown => mirrored_resonance_frequency(p),
        }
    }
}

/// Which solver produces the state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Rwa,
    Exact,
}

/// Amplitudes of the three populated basis states under the rotating-wave solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RwaAmplitudes {
    /// On `|0↓⟩_A |0↓⟩_B`.
    pub c0: Complex64,
    /// On `|0↑⟩_A |0↑⟩_B`.
    pub c1: Complex64,
    /// On `|0↑⟩_A |1↑⟩_B`.
    pub c2: Complex64,
    pub t: f64,
}

impl RwaAmplitudes {
    pub fn populations(&self) -> [f64; 3] {
        [self.c0.norm_sqr(), self.c1.norm_sqr(), self.c2.norm_sqr()]
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::Domain(format!("theta must lie in [0, pi/2], got {theta}")));
    }
    Ok(())
}

fn check_resonance(p: &SystemParams, transition: Transition) -> Result<()> {
    let resonance = transition.frequency(p);
    if (p.omega - resonance).abs() > RESONANCE_TOL {
        return Err(Error::OffResonance {
            omega: p.omega,
            resonance,
        });
    }
    Ok(())
}

/// `cosθ |0↑⟩_A|0↑⟩_B + sinθ |0↓⟩_A|0↓⟩_B`.
pub fn initial_state(theta: f64) -> Result<StateVector> {
    check_theta(theta)?;
    let mut amps = vec![ZERO; PAIR_DIM];
    amps[IDX_00_UU] = Complex64::new(theta.cos(), 0.0);
    amps[IDX_00_DD] = Complex64::new(theta.sin(), 0.0);
    StateVector::new(amps)
}

/// Closed-form amplitudes on the `|0↑⟩ ↔ |1↑⟩` resonance; θ is taken from `p`.
pub fn rwa_amplitudes(p: &SystemParams, t: f64) -> Result<RwaAmplitudes> {
    check_theta(p.theta)?;
    check_resonance(p, Transition::SpinUp)?;
    let eps = local_spectrum(p);
    let (st, ct) = p.theta.sin_cos();
    let (sg, cg) = (p.g * t).sin_cos();
    let phase = |e: f64| Complex64::from_polar(1.0, -e * t);
    let drive_phase = Complex64::from_polar(1.0, -(p.phi + std::f64::consts::FRAC_PI_2));
    Ok(RwaAmplitudes {
        c0: phase(eps.eps3 + eps.eps3) * st,
        c1: phase(eps.eps1 + eps.eps1) * (cg * ct),
        c2: phase(eps.eps1 + eps.eps2) * (sg * ct) * drive_phase,
        t,
    })
}

/// Rotating-wave state in the 16-dimensional basis (support on indices 0, 1, 10).
pub fn rwa_state(p: &SystemParams, t: f64) -> Result<StateVector> {
    let c = rwa_amplitudes(p, t)?;
    let mut amps = vec![ZERO; PAIR_DIM];
    amps[IDX_00_DD] = c.c0;
    amps[IDX_00_UU] = c.c1;
    amps[IDX_01_UU] = c.c2;
    StateVector::new(amps)
}

/// Rotating-wave state for either driven transition.
///
/// `SpinUp` reproduces [`rwa_state`]. `SpinDown` drives `|0↓⟩_B ↔ |1↓⟩_B`
/// instead, leaving the `|0↑⟩_A|0↑⟩_B` amplitude untouched; this is the
/// mirrored protocol used for `θ > π/4`.
pub fn rwa_state_for(p: &SystemParams, t: f64, transition: Transition) -> Result<StateVector> {
    if transition == Transition::SpinUp {
        return rwa_state(p, t);
    }
    check_theta(p.theta)?;
    check_resonance(p, transition)?;
    let eps = local_spectrum(p);
    let (st, ct) = p.theta.sin_cos();
    let (sg, cg) = (p.g * t).sin_cos();
    let phase = |e: f64| Complex64::from_polar(1.0, -e * t);
    let drive_phase = Complex64::from_polar(1.0, -(p.phi + std::f64::consts::FRAC_PI_2));
    let mut amps = vec![ZERO; PAIR_DIM];
    amps[IDX_00_UU] = phase(eps.eps1 + eps.eps1) * ct;
    amps[IDX_00_DD] = phase(eps.eps3 + eps.eps3) * (cg * st);
    amps[IDX_01_DD] = phase(eps.eps3 + eps.eps4) * (sg * st) * drive_phase;
    StateVector::new(amps)
}

/// Default exact-engine step: `min(0.01/g, 0.01/max|H_ij|)`.
pub fn default_step(p: &SystemParams) -> f64 {
    let h = total_hamiltonian_max_entry(p);
    let mut dt = f64::INFINITY;
    if p.g > 0.0 {
        dt = dt.min(0.01 / p.g);
    }
    if h > 0.0 {
        dt = dt.min(0.01 / h);
    }
    if dt.is_finite() {
        dt
    } else {
        0.01
    }
}

fn check_step(p: &SystemParams, dt: f64) -> Result<()> {
    let hmax = total_hamiltonian_max_entry(p);
    if !(dt > 0.0) || !dt.is_finite() || dt * hmax > STEP_GUARD {
        let bound = if hmax > 0.0 { STEP_GUARD / hmax } else { f64::INFINITY };
        return Err(Error::StepTooLarge { dt, bound });
    }
    Ok(())
}

/// Evolves `psi` from `t0` to `t1` with steps no longer than `dt`.
///
/// The interval is split into `ceil((t1 - t0) / dt)` equal steps, each applying
/// `exp(-i H(t_mid) h)`.
pub fn propagate_interval(
    p: &SystemParams,
    psi: &StateVector,
    t0: f64,
    t1: f64,
    dt: f64,
) -> Result<StateVector> {
    check_step(p, dt)?;
    if psi.dim() != PAIR_DIM {
        return Err(Error::DimensionMismatch {
            expected: PAIR_DIM,
            found: psi.dim(),
        });
    }
    let span = t1 - t0;
    if span < 0.0 || !span.is_finite() {
        return Err(Error::Domain(format!("cannot propagate from {t0} back to {t1}")));
    }
    if span == 0.0 {
        return Ok(psi.clone());
    }
    let steps = (span / dt).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    let mut amps = psi.amplitudes().to_vec();
    for k in 0..steps {
        let mid = t0 + (k as f64 + 0.5) * h;
        let u = propagator(&total_hamiltonian(p, mid), h)?;
        amps = u.apply_slice(&amps);
    }
    let out = StateVector::from_raw(amps);
    let n2 = out.norm_sqr();
    if (n2 - 1.0).abs() > NORM_TOL {
        return Err(Error::Numerical(format!("norm drifted to {n2}")));
    }
    Ok(out)
}

/// Integrates `i ∂ₜΨ = H(t) Ψ` from `t = 0` to `t_final`.
pub fn exact_propagate(
    p: &SystemParams,
    psi0: &StateVector,
    t_final: f64,
    dt: f64,
) -> Result<StateVector> {
    propagate_interval(p, psi0, 0.0, t_final, dt)
}

/// Per-time observables along a trajectory.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    /// `(P_{00↓↓}, P_{00↑↑}, P_{01↑↑})` at each time.
    pub populations: Vec<[f64; 3]>,
    /// Total population of the 16-dim state (1 up to rounding).
    pub total_population: Vec<f64>,
    /// Spin-spin concurrence of the unconditioned state.
    pub concurrence: Vec<f64>,
    /// Spin-spin concurrence after projecting particle B's band onto `|0⟩`.
    pub conditional_concurrence: Vec<f64>,
}

impl EvolutionTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Populations of `|0↓0↓⟩`, `|0↑0↑⟩`, `|0↑1↑⟩`.
pub fn tracked_populations(psi: &StateVector) -> [f64; 3] {
    [
        psi.probability(IDX_00_DD),
        psi.probability(IDX_00_UU),
        psi.probability(IDX_01_UU),
    ]
}

/// States along an ascending time grid, from either engine.
pub fn evolve_states(
    p: &SystemParams,
    times: &[f64],
    engine: Engine,
    dt: Option<f64>,
) -> Result<Vec<StateVector>> {
    if times.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::Domain("time grid must be ascending".into()));
    }
    if times.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::Domain("time grid must start at t >= 0".into()));
    }
    match engine {
        Engine::Rwa => times.iter().map(|&t| rwa_state(p, t)).collect(),
        Engine::Exact => {
            p.validate()?;
            let dt = dt.unwrap_or_else(|| default_step(p));
            let mut psi = initial_state(p.theta)?;
            let mut now = 0.0;
            let mut out = Vec::with_capacity(times.len());
            for &t in times {
                psi = propagate_interval(p, &psi, now, t, dt)?;
                now = t;
                out.push(psi.clone());
            }
            Ok(out)
        }
    }
}

/// Populations and both concurrences along `times`, with θ from `p`.
pub fn trace_evolution(
    p: &SystemParams,
    times: &[f64],
    engine: Engine,
    dt: Option<f64>,
) -> Result<EvolutionTrace> {
    let states = evolve_states(p, times, engine, dt)?;
    let mut trace = EvolutionTrace::default();
    for (t, psi) in times.iter().zip(&states) {
        trace.times.push(*t);
        trace.populations.push(tracked_populations(psi));
        trace.total_population.push(psi.norm_sqr());
        trace.concurrence.push(concurrence(&reduced_spin_density(psi)?)?);
        trace
            .conditional_concurrence
            .push(conditional_concurrence_of_state(psi)?);
    }
    Ok(trace)
}

/// Evenly spaced grid of `points` values on `[0, end]`.
pub fn linear_grid(end: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points)
            .map(|i| end * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn params(theta: f64) -> SystemParams {
        SystemParams::default().with_theta(theta)
    }

    #[test]
    fn index_constants() {
        assert_eq!((IDX_00_UU, IDX_01_UU, IDX_00_DD, IDX_01_DD), (0, 1, 10, 11));
    }

    #[test]
    fn initial_state_cases() {
        assert_eq!(initial_state(0.0).unwrap(), StateVector::basis(16, 0));
        let bell = initial_state(FRAC_PI_4).unwrap();
        assert!((bell.amplitude(0).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((bell.amplitude(10).re - FRAC_1_SQRT_2).abs() < 1e-15);
        let s = initial_state(PI / 6.0).unwrap();
        assert!((s.amplitude(0).re - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((s.amplitude(10).re - 0.5).abs() < 1e-15);
        assert!(initial_state(-0.1).is_err());
        assert!(initial_state(2.0).is_err());
    }

    #[test]
    fn rwa_amplitude_cases() {
        let p = params(PI / 6.0);
        let c = rwa_amplitudes(&p, 0.0).unwrap();
        assert!((c.c0 - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((c.c1 - Complex64::new(3f64.sqrt() / 2.0, 0.0)).norm() < 1e-15);
        assert_eq!(c.c2.norm(), 0.0);

        let c = rwa_amplitudes(&p, (PI / 3.0) / p.g).unwrap();
        let pops = c.populations();
        for (x, y) in pops.iter().zip([0.25, 0.1875, 0.5625]) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!((pops.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(c.c0.norm(), (PI / 6.0).sin());

        let c = rwa_amplitudes(&p, FRAC_PI_2 / p.g).unwrap();
        assert!(c.c1.norm() < 1e-15);
        assert!((c.c2.norm() - (PI / 6.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn rwa_requires_resonance() {
        let p = params(0.3).with_omega(3.1);
        assert!(matches!(rwa_amplitudes(&p, 1.0), Err(Error::OffResonance { .. })));
        assert!(rwa_state(&p, 1.0).is_err());
    }

    #[test]
    fn rwa_state_support_and_start() {
        let p = params(0.4);
        assert!(rwa_state(&p, 0.0).unwrap().max_abs_diff(&initial_state(0.4).unwrap()) < 1e-15);
        for t in [0.0, 3.0, 17.5, 100.0] {
            let s = rwa_state(&p, t).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            for i in 0..16 {
                if ![0, 1, 10].contains(&i) {
                    assert_eq!(s.amplitude(i), ZERO);
                }
            }
        }
    }

    #[test]
    fn mirrored_rwa_state() {
        let p0 = params(1.2);
        let p = p0.with_omega(mirrored_resonance_frequency(&p0));
        assert!(rwa_state_for(&p0, 1.0, Transition::SpinDown).is_err());
        let s = rwa_state_for(&p, FRAC_PI_2 / p.g, Transition::SpinDown).unwrap();
        assert!(s.probability(IDX_00_DD) < 1e-15);
        assert!((s.probability(IDX_01_DD) - 1.2f64.sin().powi(2)).abs() < 1e-14);
        assert!((s.probability(IDX_00_UU) - 1.2f64.cos().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn exact_engine_without_pulse_is_stationary() {
        let p = params(PI / 6.0).with_g(0.0);
        let psi0 = initial_state(p.theta).unwrap();
        let t = 3.7;
        let psi = exact_propagate(&p, &psi0, t, 0.005).unwrap();
        let eps = local_spectrum(&p);
        let expect_uu = Complex64::from_polar(1.0, -(2.0 * eps.eps1) * t) * (PI / 6.0).cos();
        let expect_dd = Complex64::from_polar(1.0, -(2.0 * eps.eps3) * t) * (PI / 6.0).sin();
        assert!((psi.amplitude(IDX_00_UU) - expect_uu).norm() < 1e-12);
        assert!((psi.amplitude(IDX_00_DD) - expect_dd).norm() < 1e-12);
    }

    #[test]
    fn exact_step_guard() {
        let p = params(0.3);
        let psi0 = initial_state(0.3).unwrap();
        assert!(matches!(
            exact_propagate(&p, &psi0, 1.0, 0.05),
            Err(Error::StepTooLarge { .. })
        ));
        assert!(exact_propagate(&p, &psi0, 1.0, 0.0).is_err());
        assert!(exact_propagate(&p, &psi0, 1.0, 0.05 / 7.0).is_ok());
        assert!(exact_propagate(&p, &psi0, 0.0, 0.001).unwrap() == psi0);
    }

    #[test]
    fn default_step_rule() {
        assert_eq!(default_step(&params(0.1)), 0.01 / 7.0);
        assert_eq!(default_step(&params(0.1).with_g(10.0)), 0.001);
    }

    #[test]
    fn trace_unentangled_input() {
        let p = params(0.0);
        let grid: Vec<f64> = linear_grid(2.0 * PI, 41).iter().map(|gt| gt / p.g).collect();
        let tr = trace_evolution(&p, &grid, Engine::Rwa, None).unwrap();
        for (k, t) in tr.times.iter().enumerate() {
            let gt = p.g * t;
            let [dd, uu, ud] = tr.populations[k];
            assert!(dd.abs() < 1e-15);
            assert!((uu - gt.cos().powi(2)).abs() < 1e-12);
            assert!((ud - gt.sin().powi(2)).abs() < 1e-12);
            assert!(tr.concurrence[k].abs() < 1e-9);
        }
    }

    #[test]
    fn grid_rejects_descending_times() {
        assert!(trace_evolution(&params(0.2), &[1.0, 0.5], Engine::Rwa, None).is_err());
    }

    #[test]
    fn linear_grid_endpoints() {
        let g = linear_grid(2.0 * PI, 201);
        assert_eq!(g.len(), 201);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[200], 2.0 * PI);
        assert!((g[50] - FRAC_PI_2).abs() < 1e-15);
    }
}
