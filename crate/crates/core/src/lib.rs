//! Quantum ring in noncommutative phase space.
//!
//! Free electrons on a mesoscopic ring whose momenta do not commute behave,
//! after a Seiberg–Witten change of variables, like ordinary electrons
//! threaded by an extra Aharonov–Bohm flux `f_nc`. This crate provides:
//!
//! - [`model`]: closed-form spectra, ground-state energies, persistent
//!   currents and the two divergence signatures λ and σ, in reduced units.
//! - [`oracle`]: brute-force level filling and finite differences used to
//!   validate every closed form.
//! - [`pipeline`]: synthetic measurements and the detection chain
//!   (differentiate, power-law fit, classify, estimate θ̃).
//! - [`dataio`]: trace CSV, run configuration, reports and plots.
//! - [`cli`]: the `ncring` command-line front end.
//!
//! Reduced units are used throughout: energies in ε₀ = ħ²/(2m*R²), currents
//! in J₀ = (e/h)ε₀ and flux in φ₀ = h/e.

pub mod cli;
pub mod constants;
pub mod dataio;
pub mod model;
pub mod oracle;
pub mod pipeline;

pub use constants::PhysConstants;
pub use model::{Parity, ReducedFlux, RingSystem, SwParams};
