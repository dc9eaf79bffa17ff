//! Entanglement distillation with a local resonant magnetic pulse.
//!
//! Two particles A and B each carry a spin and an ancillary two-level "band".
//! The spins start partly entangled, `cosθ|↑↑⟩ + sinθ|↓↓⟩`, with both bands in
//! `|0⟩`. Bob drives B's band with a pulse tuned to the `|0↑⟩ ↔ |1↑⟩`
//! transition, moving part of the `|↑↑⟩` weight into band 1, then measures
//! B's band. A band-0 outcome leaves the spins more entangled than before; at
//! the right pulse length they are maximally entangled.
//!
//! Modules, bottom up:
//!
//! - [`qmath`]: dense complex matrices, Jacobi eigendecomposition, `exp(-iHt)`.
//! - [`model`]: static, pulse and rotating-frame Hamiltonians; local and dressed spectra.
//! - [`dynamics`]: closed-form rotating-wave solution and an exact 16-dim integrator.
//! - [`entanglement`]: partial trace, Wootters concurrence, band projection.
//! - [`protocol`]: optimal pulse, single-pair runs, Monte Carlo ensembles, θ sweeps.
//! - [`cli`]: the `pulsedistill` command-line front end.
//!
//! ```
//! use pulsedistill::{protocol, SystemParams};
//!
//! let p = SystemParams::default(); // θ = π/6, on resonance
//! let plan = protocol::plan(p.theta, p.g).unwrap();
//! assert!((plan.success_probability - 0.5).abs() < 1e-12);
//! assert!((protocol::efficiency(p.theta).unwrap() - (p.theta).tan()).abs() < 1e-15);
//! ```
//!
//! Runnable walk-throughs live in `examples/`; see the crate README.

pub mod cli;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod model;
pub mod protocol;
pub mod qmath;

pub use dynamics::{Engine, EvolutionTrace, RwaAmplitudes, Transition};
pub use entanglement::{BandOutcome, DensityMatrix, MeasurementRecord};
pub use error::{Error, Result};
pub use model::{DressedSpectrum, LocalSpectrum, SystemParams};
pub use protocol::{DistillationPlan, EnsembleStats, PairOptions, SweepRow};
pub use qmath::{ComplexMatrix, StateVector};
