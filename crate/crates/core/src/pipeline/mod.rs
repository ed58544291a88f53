//! The detection chain: simulate or ingest a current trace, differentiate it
//! into λ and σ, fit both against `A·f^p`, apply the criterion and invert
//! the amplitudes for f_nc and θ̃.

mod classify;
mod differentiate;
mod estimate;
mod fit;
mod synth;
mod trace;

pub use classify::{
    classify, estimate_theta_tilde, trend, ThetaEstimate, Thresholds, Trend, Verdict, VerdictKind,
};
pub use differentiate::{differentiate_trace, DiffMethod, SignaturePoint, SignatureTrace, Stencil};
pub use estimate::{estimate_electron_number, linear_fit, ElectronEstimate, LinearFit};
pub use fit::{fit_power_law, PowerLawFit, MIN_FIT_POINTS};
pub use synth::{synthesize_reduced, synthesize_trace, FluxGrid, SweepSpec};
pub use trace::{CurrentTrace, TraceMeta, TraceSource, MIN_TRACE_POINTS};

use crate::constants::PhysConstants;
use crate::model::Parity;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid sweep: {0}")]
    InvalidRange(String),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("smoothing window {window} must be odd, >= 1 and below half the trace length {len}")]
    InvalidWindow { window: usize, len: usize },
    #[error("degenerate linear fit: {0}")]
    DegenerateFit(String),
    #[error("only {usable} points above the noise floor (need {MIN_FIT_POINTS})")]
    InsufficientSignal { usable: usize },
    #[error("no noncommutative signal was detected")]
    NotDetected,
}

/// Everything `run_detection` needs besides the trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionSettings {
    pub smoothing_window: usize,
    pub fit_window: (f64, f64),
    pub thresholds: Thresholds,
    /// Known electron number; `None` estimates it from the data.
    pub n_electrons_hint: Option<u64>,
    /// Ring radius (m) and α, needed only to convert f_nc into θ̃.
    pub radius: f64,
    pub alpha: f64,
    pub consts: PhysConstants,
}

impl Default for DetectionSettings {
    fn default() -> Self {
        Self {
            smoothing_window: 1,
            fit_window: (1e-3, 1e-1),
            thresholds: Thresholds::default(),
            n_electrons_hint: None,
            radius: 1e-6,
            alpha: 1.0,
            consts: PhysConstants::codata2018(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub electrons: ElectronEstimate,
    pub signatures: SignatureTrace,
    pub verdict: Verdict,
}

/// Run differentiate → fit → classify → estimate on one trace.
pub fn run_detection(
    trace: &CurrentTrace,
    settings: &DetectionSettings,
) -> Result<Detection, PipelineError> {
    let mut electrons = estimate_electron_number(trace)?;
    let mut n_stderr = electrons.n_stderr();
    if let Some(n) = settings.n_electrons_hint {
        electrons.n_electrons = n;
        electrons.parity = Parity::of(n);
        n_stderr = 0.0;
    }
    let mut signatures = differentiate_trace(
        trace,
        Some(electrons.n_electrons),
        settings.smoothing_window,
    )?;
    signatures.n_stderr = n_stderr;

    let (lo, hi) = settings.fit_window;
    let in_window: Vec<&SignaturePoint> = signatures
        .central_points()
        .filter(|p| p.f >= lo && p.f <= hi)
        .collect();
    let noise_floor = in_window
        .iter()
        .map(|p| p.noise * p.f * p.f)
        .fold(0.0f64, f64::max);
    // An error δN in N shifts σ by −δN/f², i.e. by δN in amplitude.
    let sigma_floor = noise_floor.max(3.0 * n_stderr);

    let lambda_pts: Vec<(f64, f64)> = in_window.iter().map(|p| (p.f, p.lambda)).collect();
    let sigma_pts: Vec<(f64, f64)> = in_window.iter().map(|p| (p.f, p.sigma)).collect();
    let lambda_fit = fit_power_law(&lambda_pts, settings.fit_window, noise_floor);
    let sigma_fit = fit_power_law(&sigma_pts, settings.fit_window, sigma_floor);

    let mut verdict = classify(
        lambda_fit.as_ref().ok(),
        sigma_fit.as_ref().ok(),
        electrons.n_electrons,
        electrons.parity,
        &settings.thresholds,
    );
    for (name, fit) in [("lambda", &lambda_fit), ("sigma", &sigma_fit)] {
        if let Err(e) = fit {
            verdict.diagnostics.push(format!("{name} fit: {e}"));
        }
    }
    if verdict.kind.is_detection() {
        let est =
            estimate_theta_tilde(&verdict, settings.radius, settings.alpha, &settings.consts)?;
        verdict.estimated_f_nc = Some(est.f_nc);
        verdict.f_nc_cross_check = Some(est.f_nc_cross_check);
        verdict.estimated_theta_tilde = Some(est.theta_tilde);
        verdict.diagnostics.push(format!(
            "f_nc cross-check relative gap {:.3e}",
            est.relative_gap
        ));
    }
    Ok(Detection {
        electrons,
        signatures,
        verdict,
    })
}
