use super::estimate::linear_fit;
use super::PipelineError;

/// Fewest points a power-law fit will accept.
pub const MIN_FIT_POINTS: usize = 5;

/// `value ≈ amplitude · f^exponent`, from a straight line in log-log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub amplitude: f64,
    pub exponent: f64,
    pub r_squared: f64,
    pub n_points_used: usize,
    /// Noise envelope used to select points, as the amplitude of an f⁻² law.
    pub residual_floor: f64,
    /// Fraction of the selected points that share the amplitude's sign.
    pub sign_consistency: f64,
}

/// Least-squares fit of `log10|value|` on `log10 f`.
///
/// Points outside `f_window` or with `|value|·f² ≤ noise_floor` are skipped.
/// Expressing the floor as an f⁻² amplitude matches how differentiated
/// noise grows towards small flux, so one number bounds it over the whole
/// window. The amplitude takes the majority sign of the selected values.
pub fn fit_power_law(
    points: &[(f64, f64)],
    f_window: (f64, f64),
    noise_floor: f64,
) -> Result<PowerLawFit, PipelineError> {
    let (lo, hi) = f_window;
    let selected: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(f, v)| f > 0.0 && f >= lo && f <= hi && v.is_finite())
        .filter(|&(f, v)| v != 0.0 && v.abs() * f * f > noise_floor)
        .collect();
    if selected.len() < MIN_FIT_POINTS {
        return Err(PipelineError::InsufficientSignal {
            usable: selected.len(),
        });
    }
    let xs: Vec<f64> = selected.iter().map(|p| p.0.log10()).collect();
    let ys: Vec<f64> = selected.iter().map(|p| p.1.abs().log10()).collect();
    let line = linear_fit(&xs, &ys).ok_or(PipelineError::InsufficientSignal {
        usable: selected.len(),
    })?;

    let positive = selected.iter().filter(|p| p.1 > 0.0).count();
    let negative = selected.len() - positive;
    let (sign, majority) = if positive >= negative {
        (1.0, positive)
    } else {
        (-1.0, negative)
    };
    Ok(PowerLawFit {
        amplitude: sign * 10f64.powf(line.intercept),
        exponent: line.slope,
        r_squared: line.r_squared,
        n_points_used: selected.len(),
        residual_floor: noise_floor,
        sign_consistency: majority as f64 / selected.len() as f64,
    })
}
