use super::estimate::{estimate_electron_number, linear_fit};
use super::trace::{CurrentTrace, MIN_TRACE_POINTS};
use super::PipelineError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    /// Three-point central difference with nonuniform-grid weights.
    Central,
    /// Two-point one-sided difference (first and last sample).
    OneSided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignaturePoint {
    pub f: f64,
    pub lambda: f64,
    pub sigma: f64,
    /// Propagated standard deviation of either signature at this point.
    pub noise: f64,
    pub stencil: Stencil,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiffMethod {
    pub smoothing_window: usize,
    /// Endpoints fall back to one-sided differences.
    pub one_sided_endpoints: bool,
}

impl std::fmt::Display for DiffMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "central-3pt-nonuniform, moving-average window {}{}",
            self.smoothing_window,
            if self.one_sided_endpoints {
                ", one-sided endpoints"
            } else {
                ""
            }
        )
    }
}

/// λ and σ sampled on the flux values of a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureTrace {
    pub points: Vec<SignaturePoint>,
    pub method: DiffMethod,
    /// Electron number used to form `(J − N)/f`.
    pub n_electrons: u64,
    /// Standard error of that electron number (0 when supplied as a hint).
    pub n_stderr: f64,
    /// Estimated standard deviation of the current samples.
    pub current_noise: f64,
}

impl SignatureTrace {
    pub fn central_points(&self) -> impl Iterator<Item = &SignaturePoint> {
        self.points.iter().filter(|p| p.stencil == Stencil::Central)
    }
}

/// Differentiate `J/f` and `(J − N)/f` with respect to `f`.
///
/// Both quotients are smoothed with a centered moving average of width
/// `smoothing_window` (shrinking symmetrically at the ends) before taking
/// three-point derivatives. Noise on the current is estimated from the
/// residuals of a straight-line fit and propagated through the same linear
/// operators.
pub fn differentiate_trace(
    trace: &CurrentTrace,
    n_electrons_hint: Option<u64>,
    smoothing_window: usize,
) -> Result<SignatureTrace, PipelineError> {
    let len = trace.len();
    if len < MIN_TRACE_POINTS {
        return Err(PipelineError::TooFewPoints {
            needed: MIN_TRACE_POINTS,
            got: len,
        });
    }
    if smoothing_window == 0 || smoothing_window.is_multiple_of(2) || 2 * smoothing_window >= len {
        return Err(PipelineError::InvalidWindow {
            window: smoothing_window,
            len,
        });
    }

    let fs: Vec<f64> = trace.flux().collect();
    let js: Vec<f64> = trace.current().collect();

    let (n_electrons, n_stderr) = match n_electrons_hint {
        Some(n) => (n, 0.0),
        None => {
            let est = estimate_electron_number(trace)?;
            (est.n_electrons, est.n_stderr())
        }
    };
    let n = n_electrons as f64;

    let line = linear_fit(&fs, &js)
        .ok_or_else(|| PipelineError::DegenerateFit("flux values are all equal".into()))?;
    let j_scale = js.iter().fold(0.0f64, |m, j| m.max(j.abs()));
    let current_noise = line.sigma_hat.max(16.0 * f64::EPSILON * j_scale.max(n));

    let u: Vec<f64> = fs.iter().zip(&js).map(|(f, j)| j / f).collect();
    let v: Vec<f64> = fs.iter().zip(&js).map(|(f, j)| (j - n) / f).collect();
    // Per-sample standard deviation of the quotients, with a round-off term.
    let u_sd: Vec<f64> = fs
        .iter()
        .zip(u.iter().zip(&v))
        .map(|(f, (a, b))| current_noise / f + 4.0 * f64::EPSILON * a.abs().max(b.abs()))
        .collect();

    let half = smoothing_window / 2;
    let spans: Vec<(usize, usize)> = (0..len)
        .map(|i| {
            let h = half.min(i).min(len - 1 - i);
            (i - h, i + h)
        })
        .collect();
    let smooth = |xs: &[f64]| -> Vec<f64> {
        spans
            .iter()
            .map(|&(a, b)| xs[a..=b].iter().sum::<f64>() / (b - a + 1) as f64)
            .collect()
    };
    let us = smooth(&u);
    let vs = smooth(&v);

    let points = (0..len)
        .map(|i| {
            let (weights, stencil) = derivative_weights(&fs, i);
            let lambda = weights.iter().map(|&(k, w)| w * us[k]).sum();
            let sigma = weights.iter().map(|&(k, w)| w * vs[k]).sum();
            // Expand derivative ∘ smoothing into weights on raw samples.
            let mut raw: Vec<(usize, f64)> = Vec::new();
            for &(k, w) in &weights {
                let (a, b) = spans[k];
                let share = w / (b - a + 1) as f64;
                for m in a..=b {
                    match raw.iter_mut().find(|(idx, _)| *idx == m) {
                        Some(entry) => entry.1 += share,
                        None => raw.push((m, share)),
                    }
                }
            }
            let noise = raw
                .iter()
                .map(|&(m, c)| (c * u_sd[m]).powi(2))
                .sum::<f64>()
                .sqrt();
            SignaturePoint {
                f: fs[i],
                lambda,
                sigma,
                noise,
                stencil,
            }
        })
        .collect();

    Ok(SignatureTrace {
        points,
        method: DiffMethod {
            smoothing_window,
            one_sided_endpoints: true,
        },
        n_electrons,
        n_stderr,
        current_noise,
    })
}

/// Finite-difference weights `(index, weight)` for d/dx at sample `i`.
fn derivative_weights(xs: &[f64], i: usize) -> (Vec<(usize, f64)>, Stencil) {
    let last = xs.len() - 1;
    if i == 0 {
        let w = 1.0 / (xs[1] - xs[0]);
        return (vec![(0, -w), (1, w)], Stencil::OneSided);
    }
    if i == last {
        let w = 1.0 / (xs[last] - xs[last - 1]);
        return (vec![(last - 1, -w), (last, w)], Stencil::OneSided);
    }
    let h1 = xs[i] - xs[i - 1];
    let h2 = xs[i + 1] - xs[i];
    (
        vec![
            (i - 1, -h2 / (h1 * (h1 + h2))),
            (i, (h2 - h1) / (h1 * h2)),
            (i + 1, h1 / (h2 * (h1 + h2))),
        ],
        Stencil::Central,
    )
}
