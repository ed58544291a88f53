use super::dd::Dd;

use super::filling::{default_window, fill_at, LevelFilling};
use super::OracleError;
use crate::model::{persistent_current, reduce_to_zone, Parity, ReducedFlux, ReducedRing};

/// Where the current entering a signature difference comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurrentSource {
    /// `J = −Σ_occ ∂E_n/∂f` over the brute-force filling, in double-double.
    Filling,
    /// The f64 closed form. Cancellation limits its relative accuracy to
    /// roughly `ε·N/(h·|signature|)`.
    ClosedForm,
}

fn fill_pair(
    ring: &ReducedRing,
    f: f64,
    h: f64,
) -> Result<(LevelFilling, LevelFilling), OracleError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(OracleError::InvalidStep { f, h });
    }
    let window = default_window(ring.n_electrons()) + f.abs().ceil() as i64 + 1;
    let minus = fill_at(ring, Dd::diff(f, h), window)?;
    let plus = fill_at(ring, Dd::sum(f, h), window)?;
    if minus.occupied_sorted() != plus.occupied_sorted() {
        return Err(OracleError::NearDegeneracy { f, h });
    }
    Ok((minus, plus))
}

/// `−[E_g(f+h) − E_g(f−h)] / (2h)` from the filling energies.
pub fn current_by_finite_difference(
    ring: &ReducedRing,
    f: impl Into<ReducedFlux>,
    h: f64,
) -> Result<f64, OracleError> {
    let f = f.into().value();
    let (minus, plus) = fill_pair(ring, f, h)?;
    let slope = (plus.total_extended() - minus.total_extended()) / (2.0 * h);
    Ok(-f64::from(slope))
}

/// Sum of single-level currents `−2(n + f − f_nc)` over the ground-state
/// filling at `f`.
pub fn current_by_level_sum(
    ring: &ReducedRing,
    f: impl Into<ReducedFlux>,
) -> Result<f64, OracleError> {
    let f = f.into().value();
    let window = default_window(ring.n_electrons()) + f.abs().ceil() as i64 + 1;
    let fill = fill_at(ring, Dd::from(f), window)?;
    Ok(level_sum(ring, &fill, Dd::from(f)).into())
}

fn level_sum(ring: &ReducedRing, fill: &LevelFilling, flux: Dd) -> Dd {
    let shift = flux - ring.f_nc();
    fill.occupied()
        .iter()
        .fold(Dd::ZERO, |acc, &n| acc - (shift + n as f64) * 2.0)
}

/// Central differences of `J/f` and `(J − N)/f`, giving `(λ, σ)`.
pub fn signature_by_finite_difference(
    ring: &ReducedRing,
    f: impl Into<ReducedFlux>,
    h: f64,
    source: CurrentSource,
) -> Result<(f64, f64), OracleError> {
    let f = f.into().value();
    if !(h > 0.0 && f - h > 0.0) {
        return Err(OracleError::InvalidStep { f, h });
    }
    let lo = Dd::diff(f, h);
    let hi = Dd::sum(f, h);
    let (j_lo, j_hi) = match source {
        CurrentSource::Filling => {
            let (minus, plus) = fill_pair(ring, f, h)?;
            (level_sum(ring, &minus, lo), level_sum(ring, &plus, hi))
        }
        CurrentSource::ClosedForm => {
            if branch_index(ring, f - h) != branch_index(ring, f + h) {
                return Err(OracleError::NearDegeneracy { f, h });
            }
            (
                Dd::from(persistent_current(ring, f64::from(lo))),
                Dd::from(persistent_current(ring, f64::from(hi))),
            )
        }
    };
    let n = ring.n();
    let width = 2.0 * h;
    let lambda = (j_hi / hi - j_lo / lo) / width;
    let sigma = ((j_hi - n) / hi - (j_lo - n) / lo) / width;
    Ok((lambda.into(), sigma.into()))
}

fn branch_index(ring: &ReducedRing, f: f64) -> i64 {
    let x = f - ring.f_nc();
    let parity = ring.parity();
    let offset = match parity {
        Parity::Odd => 0.5,
        Parity::Even => 0.0,
    };
    let r = reduce_to_zone(x, parity);
    (x - r + offset).round() as i64
}
