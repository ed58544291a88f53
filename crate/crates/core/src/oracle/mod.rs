//! Brute-force references for the closed forms in [`crate::model`].
//!
//! Ground states are built by enumerating single-particle levels and filling
//! the N lowest; currents and signatures come from finite differences. All
//! sums and differences are carried in double-double arithmetic so that the
//! O(N³) energy constant does not swamp the O(N) flux dependence.

mod dd;
mod filling;
mod finite_diff;
mod sweep;

pub use filling::{default_window, ground_state_by_filling, LevelFilling};
pub use finite_diff::{
    current_by_finite_difference, current_by_level_sum, signature_by_finite_difference,
    CurrentSource,
};
pub use sweep::{
    distance_to_crossing, signature_sweep, spectrum_sweep, zone_grid, SignatureStats, SweepStats,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("enumeration window {window} too small for {n_electrons} electrons")]
    WindowTooSmall { window: i64, n_electrons: u64 },
    #[error("level occupation changes between f-h and f+h at f = {f} (h = {h})")]
    NearDegeneracy { f: f64, h: f64 },
    #[error("invalid finite-difference step {h} at f = {f}")]
    InvalidStep { f: f64, h: f64 },
}
