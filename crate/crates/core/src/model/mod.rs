//! Closed-form physics of the noncommutative quantum ring.
//!
//! Everything here works in reduced units: flux `f = φ/φ₀`, energies in ε₀
//! and currents in J₀. [`RingSystem`] carries the SI scales needed to leave
//! reduced units at the I/O boundary.

mod params;
mod ring;
mod signature;
mod spectrum;

pub use params::{check_sw_constraint, effective_field, effective_vector_potential, SwParams};
pub use ring::{noncommutative_flux, theta_tilde_for_flux, Parity, ReducedRing, RingSystem};
pub use signature::{lambda_signature, sigma_signature};
pub use spectrum::{eigenenergy, ground_state_energy, persistent_current, reduce_to_zone};

/// External magnetic flux in units of the flux quantum, `f = φ/φ₀`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct ReducedFlux(pub f64);

impl ReducedFlux {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for ReducedFlux {
    fn from(f: f64) -> Self {
        ReducedFlux(f)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    /// λ and σ diverge at zero external flux.
    #[error("signature is undefined at zero external flux")]
    ZeroFlux,
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> ModelError {
    ModelError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
