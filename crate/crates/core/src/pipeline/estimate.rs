use super::trace::{CurrentTrace, MIN_TRACE_POINTS};
use super::PipelineError;
use crate::model::Parity;

/// Ordinary least-squares line `y = intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    /// Residual standard deviation, `sqrt(SSR / (n − 2))`.
    pub sigma_hat: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 3 || n != ys.len() {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let sigma_hat = (ssr / (nf - 2.0)).sqrt();
    let r_squared = if syy > 0.0 {
        (1.0 - ssr / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Some(LinearFit {
        intercept,
        slope,
        sigma_hat,
        slope_stderr: sigma_hat / sxx.sqrt(),
        intercept_stderr: sigma_hat * (1.0 / nf + mx * mx / sxx).sqrt(),
        r_squared,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectronEstimate {
    pub n_electrons: u64,
    pub parity: Parity,
    pub line: LinearFit,
}

impl ElectronEstimate {
    /// Standard error of N implied by the slope uncertainty.
    pub fn n_stderr(&self) -> f64 {
        0.5 * self.line.slope_stderr
    }
}

/// Electron number and parity from the linear `J(f)` of a single branch.
///
/// Both parities have slope `−2N`; the intercept is `2N f_nc` (odd) or
/// `N(1 + 2 f_nc)` (even). If the rounded slope disagrees with the parity
/// read from the intercept, the nearest integer of that parity is used.
pub fn estimate_electron_number(trace: &CurrentTrace) -> Result<ElectronEstimate, PipelineError> {
    if trace.len() < MIN_TRACE_POINTS {
        return Err(PipelineError::TooFewPoints {
            needed: MIN_TRACE_POINTS,
            got: trace.len(),
        });
    }
    let xs: Vec<f64> = trace.flux().collect();
    let ys: Vec<f64> = trace.current().collect();
    let line = linear_fit(&xs, &ys)
        .ok_or_else(|| PipelineError::DegenerateFit("flux values are all equal".into()))?;
    if !(line.slope < 0.0) {
        return Err(PipelineError::DegenerateFit(format!(
            "current does not decrease with flux (slope {})",
            line.slope
        )));
    }
    let half_slope = -0.5 * line.slope;
    let n_slope = half_slope.round().max(0.0);
    let parity = if line.intercept.abs() < 0.5 * n_slope {
        Parity::Odd
    } else {
        Parity::Even
    };
    let n = nearest_with_parity(half_slope, parity);
    Ok(ElectronEstimate {
        n_electrons: n,
        parity,
        line,
    })
}

fn nearest_with_parity(x: f64, parity: Parity) -> u64 {
    let (base, min) = match parity {
        Parity::Odd => (1.0, 1.0),
        Parity::Even => (0.0, 2.0),
    };
    // Integers of the given parity are base + 2k.
    let k = ((x - base) / 2.0).round();
    (base + 2.0 * k).max(min) as u64
}
