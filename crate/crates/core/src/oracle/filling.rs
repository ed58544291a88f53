use std::cmp::Ordering;

use super::dd::Dd;

use super::OracleError;
use crate::model::{ReducedFlux, ReducedRing};

/// The N lowest single-particle levels and their summed energy (units of ε₀).
#[derive(Debug, Clone, PartialEq)]
pub struct LevelFilling {
    occupied: Vec<i64>,
    total: Dd,
    window: i64,
}

impl LevelFilling {
    /// Occupied quantum numbers, lowest level first.
    pub fn occupied(&self) -> &[i64] {
        &self.occupied
    }

    pub fn total_energy(&self) -> f64 {
        self.total.into()
    }

    pub(crate) fn total_extended(&self) -> Dd {
        self.total
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    /// Occupied set in ascending order of `n`.
    pub fn occupied_sorted(&self) -> Vec<i64> {
        let mut v = self.occupied.clone();
        v.sort_unstable();
        v
    }
}

/// Smallest comfortable enumeration window for `n_electrons`.
pub fn default_window(n_electrons: u64) -> i64 {
    (n_electrons / 2) as i64 + 3
}

/// Fill the N lowest levels among `n ∈ [−M, M]` at flux `f`.
///
/// Ties are broken by smaller `|n|`, then negative `n` first.
pub fn ground_state_by_filling(
    ring: &ReducedRing,
    f: impl Into<ReducedFlux>,
    window: i64,
) -> Result<LevelFilling, OracleError> {
    fill_at(ring, Dd::from(f.into().value()), window)
}

pub(crate) fn fill_at(
    ring: &ReducedRing,
    flux: Dd,
    window: i64,
) -> Result<LevelFilling, OracleError> {
    let n_electrons = ring.n_electrons();
    let too_small = OracleError::WindowTooSmall {
        window,
        n_electrons,
    };
    if window < 0 || 2 * window < n_electrons as i64 + 4 {
        return Err(too_small);
    }
    let f_nc = Dd::from(ring.f_nc());
    let shift = flux - f_nc;

    let mut levels: Vec<(Dd, i64)> = (-window..=window)
        .map(|n| {
            let k = shift + n as f64;
            (k * k, n)
        })
        .collect();
    levels.sort_by(level_order);

    let occupied: Vec<i64> = levels
        .iter()
        .take(n_electrons as usize)
        .map(|&(_, n)| n)
        .collect();
    if occupied.iter().any(|n| n.abs() == window) {
        return Err(too_small);
    }

    let offset = f_nc * f_nc * (0.75 * n_electrons as f64);
    let kinetic = levels
        .iter()
        .take(n_electrons as usize)
        .fold(Dd::ZERO, |acc, &(e, _)| acc + e);
    Ok(LevelFilling {
        occupied,
        total: kinetic - offset,
        window,
    })
}

fn level_order(a: &(Dd, i64), b: &(Dd, i64)) -> Ordering {
    a.0.partial_cmp(&b.0)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.1.abs().cmp(&b.1.abs()))
        .then_with(|| a.1.cmp(&b.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: u64, f_nc: f64) -> ReducedRing {
        ReducedRing::new(n, f_nc).unwrap()
    }

    #[test]
    fn three_electrons() {
        let fill = ground_state_by_filling(&ring(3, 0.0), 0.1, 5).unwrap();
        assert_eq!(fill.occupied_sorted(), vec![-1, 0, 1]);
        assert!((fill.total_energy() - 2.03).abs() < 1e-15);
    }

    #[test]
    fn single_electron_at_zero_flux() {
        let fill = ground_state_by_filling(&ring(1, 0.0), 0.0, 3).unwrap();
        assert_eq!(fill.occupied(), &[0]);
        assert_eq!(fill.total_energy(), 0.0);
    }

    #[test]
    fn two_electrons() {
        let fill = ground_state_by_filling(&ring(2, 0.0), 0.1, 5).unwrap();
        assert_eq!(fill.occupied(), &[0, -1]);
        let direct = 0.1f64 * 0.1 + 0.9 * 0.9;
        assert!((fill.total_energy() - direct).abs() < 1e-15);
        assert!((fill.total_energy() - 0.82).abs() < 1e-15);
    }

    #[test]
    fn tie_break_prefers_small_then_negative() {
        // At f = 0.5 the levels n = 0 and n = −1 are degenerate.
        let fill = ground_state_by_filling(&ring(1, 0.0), 0.5, 3).unwrap();
        assert_eq!(fill.occupied(), &[0]);
        // At f = 0 the levels ±1 are degenerate; −1 is filled first.
        let fill = ground_state_by_filling(&ring(2, 0.0), 0.0, 4).unwrap();
        assert_eq!(fill.occupied(), &[0, -1]);
    }

    #[test]
    fn window_checks() {
        assert!(matches!(
            ground_state_by_filling(&ring(10, 0.0), 0.1, 6),
            Err(OracleError::WindowTooSmall { .. })
        ));
        // Large flux pushes the Fermi sea against the window edge.
        assert!(matches!(
            ground_state_by_filling(&ring(4, 0.0), 3.2, 4),
            Err(OracleError::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn window_saturation() {
        for n in [1u64, 2, 5, 8, 33] {
            for f in [-0.9, -0.3, 0.0, 0.2, 0.7] {
                let r = ring(n, 0.01);
                let m = default_window(n);
                let a = ground_state_by_filling(&r, f, m).unwrap();
                let b = ground_state_by_filling(&r, f, m + 5).unwrap();
                assert_eq!(a.occupied(), b.occupied());
                assert_eq!(a.total_energy(), b.total_energy());
            }
        }
    }

    #[test]
    fn total_is_sum_of_occupied_levels() {
        let r = ring(7, 0.3);
        let fill = ground_state_by_filling(&r, 0.45, 10).unwrap();
        let naive: f64 = fill
            .occupied()
            .iter()
            .map(|&n| crate::model::eigenenergy(&r, n, 0.45))
            .sum();
        assert!((fill.total_energy() - naive).abs() < 1e-12);
        let distinct: std::collections::BTreeSet<_> = fill.occupied().iter().collect();
        assert_eq!(distinct.len(), 7);
    }

    #[test]
    fn large_ring_keeps_flux_dependence() {
        // N = 1e5: the N³/12 constant is ~8e13, the flux term is O(N).
        let r = ring(100_001, 0.0);
        let m = default_window(r.n_electrons());
        let a = ground_state_by_filling(&r, 0.1, m)
            .unwrap()
            .total_extended();
        let b = ground_state_by_filling(&r, 0.2, m)
            .unwrap()
            .total_extended();
        let diff: f64 = (b - a).into();
        // N[(0.2)² − (0.1)²] = 0.03 N
        assert!((diff - 0.03 * 100_001.0).abs() < 1e-6, "{diff}");
    }
}
