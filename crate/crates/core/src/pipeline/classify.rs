use super::fit::PowerLawFit;
use super::PipelineError;
use crate::constants::PhysConstants;
use crate::model::{theta_tilde_for_flux, Parity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    /// λ diverges as −1/f² while σ diverges as +1/f².
    OddNcDetected,
    /// Both diverge as −1/f² with λ < σ.
    EvenNcDetected,
    /// Only the parity's f_nc-independent signature diverges.
    NoNcDetected,
    Inconclusive,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::OddNcDetected => "OddNcDetected",
            VerdictKind::EvenNcDetected => "EvenNcDetected",
            VerdictKind::NoNcDetected => "NoNcDetected",
            VerdictKind::Inconclusive => "Inconclusive",
        }
    }

    pub fn is_detection(self) -> bool {
        matches!(
            self,
            VerdictKind::OddNcDetected | VerdictKind::EvenNcDetected
        )
    }
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Decision thresholds for calling a signature `±1/f²` divergent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Accepted exponent band is `−2 ± exponent_tol`.
    pub exponent_tol: f64,
    /// |amplitude| must exceed this multiple of the fit's residual floor.
    pub amplitude_floor_mult: f64,
    /// Minimum fraction of fitted points sharing the amplitude's sign.
    pub min_sign_consistency: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            exponent_tol: 0.3,
            amplitude_floor_mult: 3.0,
            min_sign_consistency: 0.9,
        }
    }
}

/// Trend of one signature over the fit window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    DivergentNegative,
    DivergentPositive,
    NotDivergent,
}

/// Outcome of the detection criterion plus the estimates derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub lambda_fit: Option<PowerLawFit>,
    pub sigma_fit: Option<PowerLawFit>,
    pub estimated_n: u64,
    pub estimated_parity: Parity,
    /// Zero for `NoNcDetected`, `None` when inconclusive.
    pub estimated_f_nc: Option<f64>,
    /// Independent f_nc from the other signature, for detections.
    pub f_nc_cross_check: Option<f64>,
    /// θ̃ in kg²·m²·s⁻², consistent with `estimated_f_nc`.
    pub estimated_theta_tilde: Option<f64>,
    pub thresholds: Thresholds,
    pub diagnostics: Vec<String>,
}

pub fn trend(fit: Option<&PowerLawFit>, thresholds: &Thresholds) -> (Trend, String) {
    let Some(fit) = fit else {
        return (
            Trend::NotDivergent,
            "insufficient signal above noise floor".into(),
        );
    };
    if (fit.exponent + 2.0).abs() > thresholds.exponent_tol {
        return (
            Trend::NotDivergent,
            format!(
                "exponent {:.3} outside -2 ± {}",
                fit.exponent, thresholds.exponent_tol
            ),
        );
    }
    let amp_threshold = thresholds.amplitude_floor_mult * fit.residual_floor;
    if !(fit.amplitude.abs() > amp_threshold) {
        return (
            Trend::NotDivergent,
            format!(
                "|amplitude| {:.3e} not above {:.3e}",
                fit.amplitude.abs(),
                amp_threshold
            ),
        );
    }
    if fit.sign_consistency < thresholds.min_sign_consistency {
        return (
            Trend::NotDivergent,
            format!("sign consistency {:.2} too low", fit.sign_consistency),
        );
    }
    let t = if fit.amplitude < 0.0 {
        Trend::DivergentNegative
    } else {
        Trend::DivergentPositive
    };
    (
        t,
        format!(
            "exponent {:.3}, amplitude {:.4e}",
            fit.exponent, fit.amplitude
        ),
    )
}

/// Apply the two-case detection criterion.
///
/// Odd rings: λ ∝ −f_nc/f² and σ ∝ +1/f²; detection needs both. Even rings:
/// λ ∝ −1/f² and σ ∝ −f_nc/f²; detection needs both negative with λ < σ,
/// read as amplitude ordering. Seeing only the f_nc-independent signature is
/// the commutative outcome. Estimates are left empty; see
/// [`estimate_theta_tilde`] and [`super::run_detection`].
pub fn classify(
    lambda_fit: Option<&PowerLawFit>,
    sigma_fit: Option<&PowerLawFit>,
    n_electrons: u64,
    parity: Parity,
    thresholds: &Thresholds,
) -> Verdict {
    let (lt, lmsg) = trend(lambda_fit, thresholds);
    let (st, smsg) = trend(sigma_fit, thresholds);
    let mut diagnostics = vec![format!("lambda: {lmsg}"), format!("sigma: {smsg}")];

    use Trend::*;
    let kind = match (parity, lt, st) {
        (Parity::Odd, DivergentNegative, DivergentPositive) => VerdictKind::OddNcDetected,
        (Parity::Even, DivergentNegative, DivergentNegative) => {
            let (a_l, a_s) = (lambda_fit.unwrap().amplitude, sigma_fit.unwrap().amplitude);
            if a_l < a_s {
                VerdictKind::EvenNcDetected
            } else {
                diagnostics.push(format!(
                    "both negative but lambda amplitude {a_l:.4e} not below sigma amplitude {a_s:.4e}"
                ));
                VerdictKind::Inconclusive
            }
        }
        (Parity::Odd, NotDivergent, DivergentPositive) => VerdictKind::NoNcDetected,
        (Parity::Even, DivergentNegative, NotDivergent) => VerdictKind::NoNcDetected,
        (p, l, s) => {
            diagnostics.push(format!(
                "pattern (lambda {l:?}, sigma {s:?}) matches no criterion case for {p} parity"
            ));
            VerdictKind::Inconclusive
        }
    };
    let estimated_f_nc = match kind {
        VerdictKind::NoNcDetected => Some(0.0),
        _ => None,
    };
    Verdict {
        kind,
        lambda_fit: lambda_fit.copied(),
        sigma_fit: sigma_fit.copied(),
        estimated_n: n_electrons,
        estimated_parity: parity,
        estimated_f_nc,
        f_nc_cross_check: None,
        estimated_theta_tilde: estimated_f_nc.map(|_| 0.0),
        thresholds: *thresholds,
        diagnostics,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaEstimate {
    pub f_nc: f64,
    pub f_nc_cross_check: f64,
    /// |f_nc − cross_check| / f_nc.
    pub relative_gap: f64,
    pub theta_tilde: f64,
}

/// Invert the signature amplitudes for f_nc, then θ̃ = f_nc·ħ²α²/R².
///
/// Odd: `f_nc = −A_λ/(2N)`, cross-check `(1 − A_σ/N)/2`.
/// Even: `f_nc = −A_σ/(2N)`, cross-check `(−A_λ/N − 1)/2`.
pub fn estimate_theta_tilde(
    verdict: &Verdict,
    radius: f64,
    alpha: f64,
    consts: &PhysConstants,
) -> Result<ThetaEstimate, PipelineError> {
    let (Some(lf), Some(sf)) = (&verdict.lambda_fit, &verdict.sigma_fit) else {
        return Err(PipelineError::NotDetected);
    };
    let n = verdict.estimated_n as f64;
    let (f_nc, cross) = match verdict.kind {
        VerdictKind::OddNcDetected => (-lf.amplitude / (2.0 * n), (1.0 - sf.amplitude / n) / 2.0),
        VerdictKind::EvenNcDetected => (-sf.amplitude / (2.0 * n), (-lf.amplitude / n - 1.0) / 2.0),
        _ => return Err(PipelineError::NotDetected),
    };
    let relative_gap = if f_nc != 0.0 {
        (f_nc - cross).abs() / f_nc.abs()
    } else {
        0.0
    };
    Ok(ThetaEstimate {
        f_nc,
        f_nc_cross_check: cross,
        relative_gap,
        theta_tilde: theta_tilde_for_flux(f_nc, radius, alpha, consts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit(amplitude: f64, exponent: f64) -> PowerLawFit {
        PowerLawFit {
            amplitude,
            exponent,
            r_squared: 1.0,
            n_points_used: 100,
            residual_floor: 1e-9,
            sign_consistency: 1.0,
        }
    }

    #[test]
    fn odd_case_one() {
        let v = classify(
            Some(&fit(-6e-5, -2.0)),
            Some(&fit(3.0, -2.0)),
            3,
            Parity::Odd,
            &Thresholds::default(),
        );
        assert_eq!(v.kind, VerdictKind::OddNcDetected);
        assert_eq!(v.estimated_f_nc, None);
    }

    #[test]
    fn odd_commutative() {
        let v = classify(
            None,
            Some(&fit(3.0, -2.0)),
            3,
            Parity::Odd,
            &Thresholds::default(),
        );
        assert_eq!(v.kind, VerdictKind::NoNcDetected);
        assert_eq!(v.estimated_f_nc, Some(0.0));
        assert_eq!(v.estimated_theta_tilde, Some(0.0));
    }

    #[test]
    fn even_case_two() {
        let v = classify(
            Some(&fit(-4.0, -2.0)),
            Some(&fit(-8e-5, -2.0)),
            4,
            Parity::Even,
            &Thresholds::default(),
        );
        assert_eq!(v.kind, VerdictKind::EvenNcDetected);
        let swapped = classify(
            Some(&fit(-8e-5, -2.0)),
            Some(&fit(-4.0, -2.0)),
            4,
            Parity::Even,
            &Thresholds::default(),
        );
        assert_eq!(swapped.kind, VerdictKind::Inconclusive);
    }

    #[test]
    fn even_commutative() {
        let v = classify(
            Some(&fit(-4.0, -2.0)),
            None,
            4,
            Parity::Even,
            &Thresholds::default(),
        );
        assert_eq!(v.kind, VerdictKind::NoNcDetected);
    }

    #[test]
    fn thresholds_gate_divergence() {
        let t = Thresholds::default();
        assert_eq!(trend(Some(&fit(-1.0, -1.5)), &t).0, Trend::NotDivergent);
        assert_eq!(
            trend(Some(&fit(-1.0, -1.75)), &t).0,
            Trend::DivergentNegative
        );
        let mut weak = fit(2e-9, -2.0);
        assert_eq!(trend(Some(&weak), &t).0, Trend::NotDivergent);
        weak.amplitude = 4e-9;
        assert_eq!(trend(Some(&weak), &t).0, Trend::DivergentPositive);
        let mut mixed = fit(1.0, -2.0);
        mixed.sign_consistency = 0.6;
        assert_eq!(trend(Some(&mixed), &t).0, Trend::NotDivergent);
    }

    #[test]
    fn nothing_divergent_is_inconclusive() {
        let v = classify(None, None, 3, Parity::Odd, &Thresholds::default());
        assert_eq!(v.kind, VerdictKind::Inconclusive);
        assert!(v.diagnostics.len() >= 3);
    }

    #[test]
    fn theta_from_odd_amplitude() {
        let consts = PhysConstants::codata2018();
        let n = 10_001.0;
        let v = classify(
            Some(&fit(-2.0 * n * 1.5828e-5, -2.0)),
            Some(&fit(n * (1.0 - 2.0 * 1.5828e-5), -2.0)),
            10_001,
            Parity::Odd,
            &Thresholds::default(),
        );
        let est = estimate_theta_tilde(&v, 1e-6, 1.0, &consts).unwrap();
        assert!((est.f_nc - 1.5828e-5).abs() < 1e-18);
        assert!(est.relative_gap < 1e-9);
        assert!((est.theta_tilde - 1.76e-61).abs() / 1.76e-61 < 1e-3);
    }

    #[test]
    fn theta_from_even_amplitude() {
        let consts = PhysConstants::codata2018();
        let v = classify(
            Some(&fit(-4.0 * 1.02, -2.0)),
            Some(&fit(-8.0 * 0.01, -2.0)),
            4,
            Parity::Even,
            &Thresholds::default(),
        );
        let est = estimate_theta_tilde(&v, 1e-6, 1.0, &consts).unwrap();
        assert!((est.f_nc - 0.01).abs() < 1e-15);
        assert!((est.f_nc_cross_check - 0.01).abs() < 1e-12);
    }

    #[test]
    fn theta_requires_detection() {
        let consts = PhysConstants::codata2018();
        let v = classify(
            None,
            Some(&fit(3.0, -2.0)),
            3,
            Parity::Odd,
            &Thresholds::default(),
        );
        assert!(matches!(
            estimate_theta_tilde(&v, 1e-6, 1.0, &consts),
            Err(PipelineError::NotDetected)
        ));
        assert_eq!(theta_tilde_for_flux(0.0, 1e-6, 1.0, &consts), 0.0);
    }
}
