use super::ring::{Parity, ReducedRing};
use super::ReducedFlux;

/// Map `x = f − f_nc` into the fundamental flux zone of the given parity.
///
/// Odd rings use `[−1/2, 1/2)`, even rings `[0, 1)`. Both intervals are
/// half-open so that every level crossing maps to a single, fixed branch.
pub fn reduce_to_zone(x: f64, parity: Parity) -> f64 {
    match parity {
        Parity::Odd => {
            let r = x - (x + 0.5).floor();
            // x + 0.5 can round up across an integer just below the boundary.
            if r < -0.5 {
                r + 1.0
            } else if r >= 0.5 {
                r - 1.0
            } else {
                r
            }
        }
        Parity::Even => {
            let r = x - x.floor();
            if r >= 1.0 {
                0.0
            } else {
                r
            }
        }
    }
}

/// Single-particle level `E_n / ε₀ = (n + f − f_nc)² − (3/4) f_nc²`.
pub fn eigenenergy(ring: &ReducedRing, n: i64, f: impl Into<ReducedFlux>) -> f64 {
    let f_nc = ring.f_nc();
    let k = n as f64 + f.into().value() - f_nc;
    k * k - 0.75 * f_nc * f_nc
}

/// Zero-temperature ground-state energy of N electrons, in units of ε₀.
pub fn ground_state_energy(ring: &ReducedRing, f: impl Into<ReducedFlux>) -> f64 {
    let parity = ring.parity();
    let x = reduce_to_zone(f.into().value() - ring.f_nc(), parity);
    let n = ring.n();
    let offset = n * (x * x - 0.75 * ring.f_nc() * ring.f_nc());
    match parity {
        Parity::Odd => (n * n * n - n) / 12.0 + offset,
        Parity::Even => (n * n * n + 2.0 * n) / 12.0 - n * x + offset,
    }
}

/// Ground-state persistent current `J / J₀ = −∂(E_g/ε₀)/∂f`.
///
/// Odd: `−2N x`; even: `N − 2N x`, with `x` reduced to the zone. On the
/// principal branch `x = f − f_nc`, which is the familiar
/// `(φ/φ₀)(1 − φ_nc/φ)` combination.
pub fn persistent_current(ring: &ReducedRing, f: impl Into<ReducedFlux>) -> f64 {
    let parity = ring.parity();
    let x = reduce_to_zone(f.into().value() - ring.f_nc(), parity);
    let n = ring.n();
    match parity {
        Parity::Odd => -2.0 * n * x,
        Parity::Even => n - 2.0 * n * x,
    }
}
