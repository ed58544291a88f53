use super::{
    current_by_finite_difference, current_by_level_sum, default_window, ground_state_by_filling,
    signature_by_finite_difference, CurrentSource, OracleError,
};
use crate::model::{
    ground_state_energy, lambda_signature, persistent_current, sigma_signature, Parity, ReducedRing,
};

/// Grid for the spectrum sweep: 101 points per unit zone over f ∈ [−1, 1).
pub fn zone_grid() -> Vec<f64> {
    (0..202).map(|i| -1.0 + (i as f64 + 0.5) / 101.0).collect()
}

/// Distance from `f` to the nearest ground-state level crossing.
pub fn distance_to_crossing(ring: &ReducedRing, f: f64) -> f64 {
    let offset = match ring.parity() {
        Parity::Odd => 0.5,
        Parity::Even => 0.0,
    };
    let x = f - ring.f_nc() - offset;
    (x - x.round()).abs()
}

/// Maximum deviations between closed forms and the brute-force oracle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepStats {
    /// `|E_oracle − E_closed| / max(1, |E_closed|)`.
    pub energy: f64,
    /// Closed-form J against `−ΔE_g/Δf`, same normalization.
    pub current_fd: f64,
    /// Closed-form J against the per-level current sum.
    pub current_levels: f64,
    pub points: usize,
    pub skipped: usize,
}

/// Electron numbers 1..=60, f_nc ∈ {0, 1e-5, 0.01, 0.3}, [`zone_grid`],
/// skipping points within `1e-4` of a crossing.
pub fn spectrum_sweep() -> Result<SweepStats, OracleError> {
    let mut stats = SweepStats::default();
    for n in 1..=60u64 {
        for f_nc in [0.0, 1e-5, 0.01, 0.3] {
            let ring = ReducedRing::new(n, f_nc).expect("valid sweep ring");
            for f in zone_grid() {
                if distance_to_crossing(&ring, f) < 1e-4 {
                    stats.skipped += 1;
                    continue;
                }
                let window = default_window(n) + 2;
                let e_oracle = ground_state_by_filling(&ring, f, window)?.total_energy();
                let e_closed = ground_state_energy(&ring, f);
                let j_closed = persistent_current(&ring, f);
                let j_fd = current_by_finite_difference(&ring, f, 1e-6)?;
                let j_levels = current_by_level_sum(&ring, f)?;
                let dev = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
                stats.energy = stats.energy.max(dev(e_oracle, e_closed));
                stats.current_fd = stats.current_fd.max(dev(j_fd, j_closed));
                stats.current_levels = stats.current_levels.max(dev(j_levels, j_closed));
                stats.points += 1;
            }
        }
    }
    Ok(stats)
}

/// Maximum relative deviations of λ and σ from central differences.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SignatureStats {
    pub lambda: f64,
    pub sigma: f64,
    pub points: usize,
    /// Every sampled point satisfied odd ⇒ λ < 0 < σ, even ⇒ λ < σ ≤ 0.
    pub ordering_holds: bool,
}

/// λ and σ over 48 log-spaced fluxes in `[1e-3, 0.4]` for a spread of rings.
///
/// Even rings only sample `f > f_nc`, where the closed forms describe the
/// ground state. A zero closed-form value is compared on the `N/f²` scale.
pub fn signature_sweep(
    electrons: &[u64],
    f_ncs: &[f64],
    h: f64,
) -> Result<SignatureStats, OracleError> {
    let mut stats = SignatureStats {
        ordering_holds: true,
        ..Default::default()
    };
    let grid: Vec<f64> = (0..48)
        .map(|i| 1e-3 * 400f64.powf(i as f64 / 47.0))
        .collect();
    for &n in electrons {
        for &f_nc in f_ncs {
            let ring = ReducedRing::new(n, f_nc).expect("valid sweep ring");
            for &f in &grid {
                if ring.parity() == Parity::Even && f <= f_nc {
                    continue;
                }
                if distance_to_crossing(&ring, f) < 1e-4 {
                    continue;
                }
                let (l_fd, s_fd) =
                    signature_by_finite_difference(&ring, f, h, CurrentSource::Filling)?;
                let l = lambda_signature(&ring, f).expect("f > 0");
                let s = sigma_signature(&ring, f).expect("f > 0");
                let natural = ring.n() / (f * f);
                let rel = |a: f64, b: f64| (a - b).abs() / if b == 0.0 { natural } else { b.abs() };
                stats.lambda = stats.lambda.max(rel(l_fd, l));
                stats.sigma = stats.sigma.max(rel(s_fd, s));
                let ordered = match ring.parity() {
                    Parity::Odd => l <= 0.0 && 0.0 < s && (f_nc == 0.0 || l < 0.0),
                    Parity::Even => l < s && s <= 0.0,
                };
                stats.ordering_holds &= ordered;
                stats.points += 1;
            }
        }
    }
    Ok(stats)
}
