//! Spin-spin entanglement of the two-particle state and the band measurement.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{LOCAL_DIM, PAIR_DIM};
use crate::qmath::{hermitian_eig, psd_sqrt, ComplexMatrix, StateVector, ZERO};

/// Hermiticity and trace tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-12;
/// Most negative eigenvalue tolerated (and clipped to zero).
pub const PSD_CLIP: f64 = 1e-10;
/// Outcome probabilities below this are treated as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-14;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidDensity("matrix is not square".into()));
        }
        let defect = m.hermiticity_defect();
        if !(defect <= DENSITY_TOL) {
            return Err(Error::InvalidDensity(format!("not Hermitian ({defect:e})")));
        }
        let tr = m.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace is {tr}")));
        }
        let eig = hermitian_eig(&m)?;
        if eig.values[0] < -PSD_CLIP {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {:e}",
                eig.values[0]
            )));
        }
        Ok(Self(m))
    }

    /// `|ψ⟩⟨ψ|` for a normalized state.
    pub fn pure(psi: &StateVector) -> Result<Self> {
        let n = psi.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                m[(r, c)] = psi.amplitude(r) * psi.amplitude(c).conj();
            }
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }
}

/// Traces out both band factors; result is in the `|↑↑⟩,|↑↓⟩,|↓↑⟩,|↓↓⟩` order.
pub fn reduced_spin_density(psi: &StateVector) -> Result<DensityMatrix> {
    if psi.dim() != PAIR_DIM {
        return Err(Error::DimensionMismatch {
            expected: PAIR_DIM,
            found: psi.dim(),
        });
    }
    let n2 = psi.norm_sqr();
    if !(n2 > 0.0) {
        return Err(Error::NotNormalized { norm_sqr: n2 });
    }
    // index = 4 * (2 sA + bA) + 2 sB + bB
    let amp = |sa: usize, ba: usize, sb: usize, bb: usize| {
        psi.amplitude(LOCAL_DIM * (2 * sa + ba) + 2 * sb + bb)
    };
    let mut rho = ComplexMatrix::zeros(4, 4);
    for sa in 0..2 {
        for sb in 0..2 {
            for sa2 in 0..2 {
                for sb2 in 0..2 {
                    let mut acc = ZERO;
                    for ba in 0..2 {
                        for bb in 0..2 {
                            acc += amp(sa, ba, sb, bb) * amp(sa2, ba, sb2, bb).conj();
                        }
                    }
                    rho[(2 * sa + sb, 2 * sa2 + sb2)] = acc / n2;
                }
            }
        }
    }
    DensityMatrix::new(rho)
}

fn spin_flip() -> ComplexMatrix {
    // σʸ ⊗ σʸ
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m
}

/// The four decreasing `λᵢ` of the two-qubit concurrence.
///
/// They are the singular values of `√ρ̃ √ρ`, obtained here as the positive
/// half of the spectrum of the Hermitian dilation `[[0, M], [M†, 0]]`. This is
/// the same set as the square-rooted spectrum of `√ρ ρ̃ √ρ` but avoids taking
/// square roots of eigenvalues that are zero up to rounding.
pub fn concurrence_lambdas(rho: &DensityMatrix) -> Result<[f64; 4]> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let root = psd_sqrt(rho.matrix(), PSD_CLIP)?;
    let flip = spin_flip();
    let root_tilde = &(&flip * &root.conj()) * &flip;
    let m = &root_tilde * &root;
    let mut dilation = ComplexMatrix::zeros(8, 8);
    for r in 0..4 {
        for c in 0..4 {
            dilation[(r, 4 + c)] = m[(r, c)];
            dilation[(4 + c, r)] = m[(r, c)].conj();
        }
    }
    let eig = hermitian_eig(&dilation)?;
    let mut lambdas = [0.0; 4];
    for (k, l) in lambdas.iter_mut().enumerate() {
        *l = eig.values[7 - k].max(0.0);
    }
    Ok(lambdas)
}

/// Wootters concurrence `max(0, λ₁ - λ₂ - λ₃ - λ₄)` of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let l = concurrence_lambdas(rho)?;
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// `2 |a₀₀ a₁₁ - a₀₁ a₁₀|` for a normalized pure two-qubit state.
pub fn pure_concurrence(amps: [Complex64; 4]) -> f64 {
    2.0 * (amps[0] * amps[3] - amps[1] * amps[2]).norm()
}

/// `|sin 2θ cos gt|`, the unconditioned concurrence under the rotating-wave solution.
pub fn concurrence_curve(theta: f64, gt: f64) -> f64 {
    ((2.0 * theta).sin() * gt.cos()).abs()
}

/// Spin concurrence after a successful band-0 projection, `|sin 2θ cos gt| / (sin²θ + cos²θ cos²gt)`.
///
/// The single degenerate point `θ = 0, cos gt = 0` returns 0.
pub fn conditional_concurrence(theta: f64, gt: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let cg = gt.cos();
    let den = s * s + c * c * cg * cg;
    let num = ((2.0 * theta).sin() * cg).abs();
    if den <= f64::MIN_POSITIVE {
        0.0
    } else {
        num / den
    }
}

/// Band measurement outcome on one particle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BandOutcome {
    Band0,
    Band1,
}

impl BandOutcome {
    pub fn band(self) -> usize {
        match self {
            BandOutcome::Band0 => 0,
            BandOutcome::Band1 => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BandOutcome::Band0 => "band0",
            BandOutcome::Band1 => "band1",
        }
    }
}

impl fmt::Display for BandOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Particle {
    A,
    B,
}

/// Result of one band projection.
#[derive(Clone, Debug)]
pub struct MeasurementRecord {
    pub outcome: BandOutcome,
    pub probability: f64,
    pub post_state: StateVector,
    pub post_concurrence: f64,
}

fn band_of(index: usize, particle: Particle) -> usize {
    let local = match particle {
        Particle::A => index / LOCAL_DIM,
        Particle::B => index % LOCAL_DIM,
    };
    local % 2
}

/// Probability of `outcome` when measuring `particle`'s band.
pub fn band_probability(psi: &StateVector, particle: Particle, outcome: BandOutcome) -> f64 {
    psi.amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| band_of(*i, particle) == outcome.band())
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Projects either particle's band. Measuring particle A is not part of the
/// distillation procedure; it is kept for symmetry checks.
pub fn project_band(
    psi: &StateVector,
    particle: Particle,
    outcome: BandOutcome,
) -> Result<MeasurementRecord> {
    if psi.dim() != PAIR_DIM {
        return Err(Error::DimensionMismatch {
            expected: PAIR_DIM,
            found: psi.dim(),
        });
    }
    let projected: Vec<Complex64> = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, &a)| if band_of(i, particle) == outcome.band() { a } else { ZERO })
        .collect();
    let probability: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
    if probability < ZERO_PROBABILITY {
        return Err(Error::ZeroProbability {
            outcome: outcome.label(),
        });
    }
    let post_state = StateVector::normalized(projected)?;
    let post_concurrence = concurrence(&reduced_spin_density(&post_state)?)?;
    Ok(MeasurementRecord {
        outcome,
        probability,
        post_state,
        post_concurrence,
    })
}

/// Projects particle B's band with `P₀ = |0⟩⟨0|` or `P₁ = |1⟩⟨1|`.
pub fn project_band_b(psi: &StateVector, outcome: BandOutcome) -> Result<MeasurementRecord> {
    project_band(psi, Particle::B, outcome)
}

/// Concurrence after a band-0 outcome on B, or 0 when that outcome is impossible.
pub fn conditional_concurrence_of_state(psi: &StateVector) -> Result<f64> {
    match project_band_b(psi, BandOutcome::Band0) {
        Ok(rec) => Ok(rec.post_concurrence),
        Err(Error::ZeroProbability { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}
