//! Concurrence of a few textbook states, and how a band measurement changes it.
//!
//! cargo run --example concurrence_basics

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use pulsedistill::entanglement::{concurrence, project_band, reduced_spin_density, Particle};
use pulsedistill::qmath::ComplexMatrix;
use pulsedistill::dynamics::{initial_state, rwa_state};
use pulsedistill::{BandOutcome, DensityMatrix, StateVector, SystemParams};

fn werner(f: f64) -> pulsedistill::Result<DensityMatrix> {
    // f |Φ+⟩⟨Φ+| + (1 - f) I/4
    let mut d = vec![Complex64::new(0.0, 0.0); 16];
    for k in [0, 5, 10, 15] {
        d[k].re = (1.0 - f) / 4.0;
    }
    for k in [0, 3, 12, 15] {
        d[k].re += f / 2.0;
    }
    DensityMatrix::new(ComplexMatrix::from_row_major(4, 4, d)?)
}

fn main() -> pulsedistill::Result<()> {
    let c = |x: f64| Complex64::new(x, 0.0);
    let bell = StateVector::new(vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)])?;
    let product = StateVector::basis(4, 0);
    println!("Bell state       C = {:.6}", concurrence(&DensityMatrix::pure(&bell)?)?);
    println!("product state    C = {:.6}", concurrence(&DensityMatrix::pure(&product)?)?);
    for f in [0.2, 1.0 / 3.0, 0.5, 0.8] {
        println!("Werner f = {f:.3}  C = {:.6}", concurrence(&werner(f)?)?);
    }

    let theta = PI / 6.0;
    let psi0 = initial_state(theta)?;
    println!("\ncos θ|↑↑⟩ + sin θ|↓↓⟩, θ = π/6: C = {:.6}", concurrence(&reduced_spin_density(&psi0)?)?);

    let p = SystemParams::default().with_theta(theta);
    let psi = rwa_state(&p, 0.6 / p.g)?;
    println!("after a pulse of gt = 0.6:     C = {:.6}", concurrence(&reduced_spin_density(&psi)?)?);
    for outcome in [BandOutcome::Band0, BandOutcome::Band1] {
        let rec = project_band(&psi, Particle::B, outcome)?;
        println!(
            "  B's band reads {outcome} with p = {:.4}; spins then have C = {:.6}",
            rec.probability, rec.post_concurrence
        );
    }
    Ok(())
}
