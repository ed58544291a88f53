//! The two detection signatures
//! λ = ∂(J/φ)/∂φ and σ = ∂((J − N J₀)/φ)/∂φ.
//!
//! In reduced units (J in J₀, φ in φ₀) both are pure numbers. The closed
//! forms describe the principal branch of the ground state, `x = f − f_nc`
//! inside the parity's zone; for even rings that means `f ≥ f_nc`.

use super::ring::{Parity, ReducedRing};
use super::{ModelError, ReducedFlux};

/// λ: odd `−2N f_nc / f²`, even `−N (1 + 2 f_nc) / f²`.
pub fn lambda_signature(ring: &ReducedRing, f: impl Into<ReducedFlux>) -> Result<f64, ModelError> {
    let f = nonzero(f.into())?;
    let n = ring.n();
    let f_nc = ring.f_nc();
    Ok(match ring.parity() {
        Parity::Odd => -2.0 * n * f_nc / (f * f),
        Parity::Even => -n * (1.0 + 2.0 * f_nc) / (f * f),
    })
}

/// σ: odd `N (1 − 2 f_nc) / f²`, even `−2N f_nc / f²`.
pub fn sigma_signature(ring: &ReducedRing, f: impl Into<ReducedFlux>) -> Result<f64, ModelError> {
    let f = nonzero(f.into())?;
    let n = ring.n();
    let f_nc = ring.f_nc();
    Ok(match ring.parity() {
        Parity::Odd => n * (1.0 - 2.0 * f_nc) / (f * f),
        Parity::Even => -2.0 * n * f_nc / (f * f),
    })
}

fn nonzero(f: ReducedFlux) -> Result<f64, ModelError> {
    if f.value() == 0.0 {
        Err(ModelError::ZeroFlux)
    } else {
        Ok(f.value())
    }
}
