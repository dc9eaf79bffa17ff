//! Hamiltonians for a particle carrying a spin and a two-level "band".
//!
//! Local basis order is `|0↑⟩, |1↑⟩, |0↓⟩, |1↓⟩` (indices 0..4, i.e.
//! `2 * spin + band` with ↑ = 0). Two-particle states use `4 * a + b`.
//! Conventions: `σᶻ|↑⟩ = +|↑⟩`, `τᶻ|0⟩ = +|0⟩`, ħ = 1.
//!
//! The drive `g e^{i(ωt+φ)}` sits on the `|0⟩⟨1|` band entries, (0,1) and
//! (2,3) locally, with the Hermitian conjugate on the mirrored entries. With
//! the frame change `U(t) = exp(-i ω t τᶻ / 2)` this yields the rotating-frame
//! matrix returned by [`rotating_frame_hamiltonian`], which is resonant for
//! `ω = ε₂ - ε₁`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmath::{kron, ComplexMatrix, StateVector, ZERO};

/// Local dimension of one particle (spin ⊗ band).
pub const LOCAL_DIM: usize = 4;
/// Dimension of the two-particle space.
pub const PAIR_DIM: usize = LOCAL_DIM * LOCAL_DIM;

/// `|η₃₄|` at or above which the rotating-wave solution is trusted.
pub const RWA_ETA_THRESHOLD: f64 = 20.0;

/// Local basis labels, in index order.
pub const LOCAL_LABELS: [&str; LOCAL_DIM] = ["0↑", "1↑", "0↓", "1↓"];

/// Index of `|band, spin⟩` in the local basis (`spin_down = false` is ↑).
pub const fn local_index(band: usize, spin_down: bool) -> usize {
    2 * (spin_down as usize) + band
}

/// Index of `|a⟩_A |b⟩_B` in the two-particle basis.
pub const fn pair_index(a: usize, b: usize) -> usize {
    LOCAL_DIM * a + b
}

/// Physical constants and pulse settings, all in one energy unit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SystemParams {
    /// Spin Larmor frequency.
    pub omega_s: f64,
    /// Band Larmor frequency.
    pub omega_b: f64,
    /// Spin-band scalar coupling.
    pub j: f64,
    /// Pulse magnitude.
    pub g: f64,
    /// Pulse frequency.
    pub omega: f64,
    /// Pulse phase in radians.
    pub phi: f64,
    /// Initial-state angle in radians, `cosθ|↑↑⟩ + sinθ|↓↓⟩`.
    pub theta: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::resonant(1.0, 2.0, 0.5, 0.05, 0.0, std::f64::consts::PI / 6.0)
    }
}

impl SystemParams {
    /// Parameters with the pulse tuned to the `|0↑⟩ ↔ |1↑⟩` resonance.
    pub fn resonant(omega_s: f64, omega_b: f64, j: f64, g: f64, phi: f64, theta: f64) -> Self {
        let mut p = Self {
            omega_s,
            omega_b,
            j,
            g,
            omega: 0.0,
            phi,
            theta,
        };
        p.omega = resonance_frequency(&p);
        p
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g = g;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.omega_s,
            self.omega_b,
            self.j,
            self.g,
            self.omega,
            self.phi,
            self.theta,
        ]
        .iter()
        .all(|x| x.is_finite());
        if !finite {
            return Err(Error::Domain("parameters must be finite".into()));
        }
        if self.g < 0.0 {
            return Err(Error::Domain(format!("g must be >= 0, got {}", self.g)));
        }
        if self.j <= 0.0 {
            return Err(Error::Domain(format!(
                "J must be > 0 for resonance selectivity, got {}",
                self.j
            )));
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&self.theta) {
            return Err(Error::Domain(format!(
                "theta must lie in [0, pi/2], got {}",
                self.theta
            )));
        }
        Ok(())
    }
}

/// The four eigenvalues of the static single-particle Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalSpectrum {
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    pub eps4: f64,
}

impl LocalSpectrum {
    pub fn as_array(&self) -> [f64; 4] {
        [self.eps1, self.eps2, self.eps3, self.eps4]
    }
}

pub fn local_spectrum(p: &SystemParams) -> LocalSpectrum {
    let (ws, wb, j) = (p.omega_s, p.omega_b, p.j);
    LocalSpectrum {
        eps1: -ws - wb + j,
        eps2: -ws + wb - j,
        eps3: ws - wb - j,
        eps4: ws + wb + j,
    }
}

/// `-(ω_s σᶻ + ω_b τᶻ - J σᶻ τᶻ)`, diagonal in the local basis.
pub fn static_hamiltonian(p: &SystemParams) -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&local_spectrum(p).as_array())
}

/// The rectangular transverse pulse acting on one particle's band.
pub fn pulse_hamiltonian(p: &SystemParams, t: f64) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(LOCAL_DIM, LOCAL_DIM);
    let coupling = Complex64::from_polar(p.g, p.omega * t + p.phi);
    for spin_down in [false, true] {
        let lo = local_index(0, spin_down);
        let hi = local_index(1, spin_down);
        h[(lo, hi)] = coupling;
        h[(hi, lo)] = coupling.conj();
    }
    h
}

/// Full two-particle Hamiltonian with the pulse applied to particle B only.
pub fn total_hamiltonian(p: &SystemParams, t: f64) -> ComplexMatrix {
    let h0 = static_hamiltonian(p);
    let id = ComplexMatrix::identity(LOCAL_DIM);
    let hb = h0.add(&pulse_hamiltonian(p, t));
    kron(&h0, &id).add(&kron(&id, &hb))
}

/// Largest entry magnitude of [`total_hamiltonian`] over all times.
pub fn total_hamiltonian_max_entry(p: &SystemParams) -> f64 {
    let eps = local_spectrum(p).as_array();
    let diag = eps
        .iter()
        .flat_map(|a| eps.iter().map(move |b| (a + b).abs()))
        .fold(0.0, f64::max);
    diag.max(p.g.abs())
}

/// Time-independent Hamiltonian of particle B in the frame rotating at ω.
pub fn rotating_frame_hamiltonian(p: &SystemParams) -> ComplexMatrix {
    let eps = local_spectrum(p);
    let half = 0.5 * p.omega;
    let mut h = ComplexMatrix::from_real_diag(&[
        eps.eps1 + half,
        eps.eps2 - half,
        eps.eps3 + half,
        eps.eps4 - half,
    ]);
    let coupling = Complex64::from_polar(p.g, p.phi);
    for (lo, hi) in [(0, 1), (2, 3)] {
        h[(lo, hi)] = coupling;
        h[(hi, lo)] = coupling.conj();
    }
    h
}

/// Eigen-decomposition of the rotating-frame Hamiltonian in closed form.
#[derive(Clone, Debug)]
pub struct DressedSpectrum {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub e4: f64,
    pub psi1: StateVector,
    pub psi2: StateVector,
    pub psi3: StateVector,
    pub psi4: StateVector,
    pub eta12: f64,
    pub eta34: f64,
}

impl DressedSpectrum {
    pub fn energies(&self) -> [f64; 4] {
        [self.e1, self.e2, self.e3, self.e4]
    }

    pub fn states(&self) -> [&StateVector; 4] {
        [&self.psi1, &self.psi2, &self.psi3, &self.psi4]
    }
}

fn dressed_pair(
    lo: usize,
    hi: usize,
    e_lo: f64,
    e_hi: f64,
    p: &SystemParams,
) -> Result<(f64, f64, StateVector, StateVector, f64)> {
    let eta = (e_lo - e_hi + p.omega) / (2.0 * p.g);
    let root = (1.0 + eta * eta).sqrt();
    let split = 0.5 * ((e_lo - e_hi + p.omega).powi(2) + 4.0 * p.g * p.g).sqrt();
    let mean = 0.5 * (e_lo + e_hi);
    let phase = Complex64::from_polar(1.0, -p.phi);
    let vector = |x: f64| {
        let mut amps = vec![ZERO; LOCAL_DIM];
        amps[lo] = Complex64::new(1.0, 0.0);
        amps[hi] = phase * x;
        StateVector::normalized(amps)
    };
    Ok((
        mean + split,
        mean - split,
        vector(root - eta)?,
        vector(-root - eta)?,
        eta,
    ))
}

/// Dressed energies, eigenvectors and detuning ratios `η_ij = (ε_i - ε_j + ω) / 2g`.
pub fn dressed_spectrum(p: &SystemParams) -> Result<DressedSpectrum> {
    if !(p.g > 0.0) {
        return Err(Error::DegeneratePulse);
    }
    let eps = local_spectrum(p);
    let (e1, e2, psi1, psi2, eta12) = dressed_pair(0, 1, eps.eps1, eps.eps2, p)?;
    let (e3, e4, psi3, psi4, eta34) = dressed_pair(2, 3, eps.eps3, eps.eps4, p)?;
    Ok(DressedSpectrum {
        e1,
        e2,
        e3,
        e4,
        psi1,
        psi2,
        psi3,
        psi4,
        eta12,
        eta34,
    })
}

/// The `|0↑⟩ ↔ |1↑⟩` resonance `ε₂ - ε₁ = 2ω_b - 2J`.
pub fn resonance_frequency(p: &SystemParams) -> f64 {
    2.0 * p.omega_b - 2.0 * p.j
}

/// The `|0↓⟩ ↔ |1↓⟩` resonance `ε₄ - ε₃ = 2ω_b + 2J`.
pub fn mirrored_resonance_frequency(p: &SystemParams) -> f64 {
    2.0 * p.omega_b + 2.0 * p.j
}

/// Off-resonant detuning ratio and whether it clears [`RWA_ETA_THRESHOLD`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RwaValidity {
    pub eta34: f64,
    pub valid: bool,
}

pub fn rwa_validity(p: &SystemParams) -> Result<RwaValidity> {
    if !(p.g > 0.0) {
        return Err(Error::DegeneratePulse);
    }
    let eps = local_spectrum(p);
    let eta34 = (eps.eps3 - eps.eps4 + p.omega) / (2.0 * p.g);
    // relative slack so that e.g. -2 / 0.1 still counts as |eta| = 20
    let valid = eta34.abs() >= RWA_ETA_THRESHOLD * (1.0 - 1e-12);
    Ok(RwaValidity { eta34, valid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::hermitian_eig;
    use std::f64::consts::PI;

    fn defaults() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn static_hamiltonian_substitution() {
        let h = static_hamiltonian(&defaults());
        assert_eq!(h, ComplexMatrix::from_real_diag(&[-2.5, 0.5, -1.5, 3.5]));
        let zero = SystemParams {
            omega_s: 0.0,
            omega_b: 0.0,
            j: 0.0,
            ..defaults()
        };
        assert_eq!(static_hamiltonian(&zero), ComplexMatrix::zeros(4, 4));
        assert_eq!(h.trace().re, 0.0);
    }

    #[test]
    fn static_hamiltonian_matches_spin_band_operators() {
        // Build -(ω_s σᶻ⊗I + ω_b I⊗τᶻ - J σᶻ⊗τᶻ) in spin⊗band order.
        let p = SystemParams {
            omega_s: 0.7,
            omega_b: 1.9,
            j: 0.3,
            ..defaults()
        };
        let sz = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let tz = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        let i2 = ComplexMatrix::identity(2);
        let h = kron(&sz, &i2)
            .scale(p.omega_s.into())
            .add(&kron(&i2, &tz).scale(p.omega_b.into()))
            .sub(&kron(&sz, &tz).scale(p.j.into()))
            .scale((-1.0).into());
        assert!(h.max_abs_diff(&static_hamiltonian(&p)) < 1e-15);
    }

    #[test]
    fn local_spectrum_identities() {
        let s = local_spectrum(&defaults());
        assert_eq!(s.as_array(), [-2.5, 0.5, -1.5, 3.5]);
        let band_degenerate = SystemParams {
            omega_s: 1.0,
            omega_b: 0.0,
            j: 0.0,
            ..defaults()
        };
        assert_eq!(local_spectrum(&band_degenerate).as_array(), [-1.0, -1.0, 1.0, 1.0]);
        for (ws, wb, j) in [(1.0, 2.0, 0.5), (0.3, 4.0, 1.25), (-2.0, 0.5, 0.125)] {
            let p = SystemParams {
                omega_s: ws,
                omega_b: wb,
                j,
                ..defaults()
            };
            let s = local_spectrum(&p);
            assert_eq!(s.eps2 - s.eps1, 2.0 * wb - 2.0 * j);
            assert_eq!(s.eps4 - s.eps3, 2.0 * wb + 2.0 * j);
        }
    }

    #[test]
    fn pulse_hamiltonian_structure() {
        assert_eq!(pulse_hamiltonian(&defaults().with_g(0.0), 1.3), ComplexMatrix::zeros(4, 4));
        let h = pulse_hamiltonian(&defaults(), 0.0);
        let mut expected = ComplexMatrix::zeros(4, 4);
        for (a, b) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            expected[(a, b)] = Complex64::new(0.05, 0.0);
        }
        assert!(h.max_abs_diff(&expected) < 1e-17);
        for t in [0.0, 0.3, 17.0, 1234.5] {
            assert!(pulse_hamiltonian(&defaults().with_phi(0.4), t).hermiticity_defect() <= 1e-14);
        }
    }

    #[test]
    fn total_hamiltonian_without_pulse() {
        let p = defaults().with_g(0.0);
        let h = total_hamiltonian(&p, 2.0);
        let eps = local_spectrum(&p).as_array();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(h[(pair_index(a, b), pair_index(a, b))].re, eps[a] + eps[b]);
            }
        }
        let eig = hermitian_eig(&h).unwrap();
        let mut sums: Vec<f64> = eps.iter().flat_map(|a| eps.iter().map(move |b| a + b)).collect();
        sums.sort_by(f64::total_cmp);
        for (x, y) in eig.values.iter().zip(&sums) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn total_hamiltonian_is_traceless_and_hermitian() {
        let p = defaults().with_phi(1.1);
        for t in [0.0, 0.5, 40.0] {
            let h = total_hamiltonian(&p, t);
            assert!(h.trace().norm() < 1e-14);
            assert!(h.hermiticity_defect() <= 1e-14);
        }
        assert_eq!(total_hamiltonian_max_entry(&p), 7.0);
    }

    #[test]
    fn rotating_frame_substitution() {
        let p = SystemParams {
            omega: 3.0,
            ..defaults()
        };
        let h = rotating_frame_hamiltonian(&p);
        assert_eq!(h[(0, 0)].re, -1.0);
        assert_eq!(h[(1, 1)].re, -1.0);
        assert!((h[(0, 1)] - Complex64::new(0.05, 0.0)).norm() < 1e-17);
        assert!((h[(1, 0)] - Complex64::new(0.05, 0.0)).norm() < 1e-17);

        let bare = rotating_frame_hamiltonian(&p.with_g(0.0));
        let eps = local_spectrum(&p);
        assert_eq!(
            bare,
            ComplexMatrix::from_real_diag(&[eps.eps1 + 1.5, eps.eps2 - 1.5, eps.eps3 + 1.5, eps.eps4 - 1.5])
        );
    }

    #[test]
    fn dressed_spectrum_on_resonance() {
        let d = dressed_spectrum(&defaults()).unwrap();
        assert_eq!(d.eta12, 0.0);
        assert!((d.e1 - d.e2 - 0.1).abs() < 1e-15);
        assert!((d.eta34 + 20.0).abs() < 1e-12);
        assert!(d.psi1.inner(&d.psi2).norm() < 1e-12);
        assert!(d.psi3.inner(&d.psi4).norm() < 1e-12);
        assert!(matches!(dressed_spectrum(&defaults().with_g(0.0)), Err(Error::DegeneratePulse)));
    }

    #[test]
    fn dressed_states_are_eigenvectors() {
        let p = SystemParams {
            omega: 2.7,
            phi: 0.9,
            g: 0.3,
            ..defaults()
        };
        let h = rotating_frame_hamiltonian(&p);
        let d = dressed_spectrum(&p).unwrap();
        for (e, psi) in d.energies().iter().zip(d.states()) {
            let hpsi = h.apply(psi);
            let resid = hpsi
                .amplitudes()
                .iter()
                .zip(psi.amplitudes())
                .map(|(a, b)| (a - b * e).norm())
                .fold(0.0, f64::max);
            assert!(resid < 1e-12, "residual {resid:e}");
        }
    }

    #[test]
    fn resonance_and_validity() {
        assert_eq!(resonance_frequency(&defaults()), 3.0);
        let s = local_spectrum(&defaults());
        assert_eq!(resonance_frequency(&defaults()), s.eps2 - s.eps1);
        let degenerate = SystemParams {
            omega_b: 0.5,
            ..defaults()
        };
        assert_eq!(resonance_frequency(&degenerate), 0.0);

        let v = rwa_validity(&defaults()).unwrap();
        assert!((v.eta34 + 20.0).abs() < 1e-12 && v.valid);
        let strong = rwa_validity(&defaults().with_g(0.5)).unwrap();
        assert!((strong.eta34 + 2.0).abs() < 1e-12 && !strong.valid);
        let tiny = rwa_validity(&defaults().with_g(1e-9)).unwrap();
        assert!(tiny.eta34.abs() > 1e8 && tiny.valid);
        assert!(rwa_validity(&defaults().with_g(0.0)).is_err());
    }

    #[test]
    fn validate_rejects_bad_params() {
        assert!(defaults().validate().is_ok());
        assert!(defaults().with_g(-1.0).validate().is_err());
        assert!(defaults().with_theta(PI).validate().is_err());
        assert!(SystemParams { j: 0.0, ..defaults() }.validate().is_err());
        assert!(defaults().with_phi(f64::NAN).validate().is_err());
    }
}
