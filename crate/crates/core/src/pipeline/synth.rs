use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::trace::{CurrentTrace, TraceMeta, TraceSource, MIN_TRACE_POINTS};
use super::PipelineError;
use crate::model::{persistent_current, Parity, ReducedRing, RingSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxGrid {
    Uniform,
    Log,
}

impl FluxGrid {
    pub fn as_str(self) -> &'static str {
        match self {
            FluxGrid::Uniform => "uniform",
            FluxGrid::Log => "log",
        }
    }

    /// `n` points from `lo` to `hi` inclusive.
    pub fn sample(self, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let last = n.saturating_sub(1).max(1) as f64;
        let mut out: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / last;
                match self {
                    FluxGrid::Uniform => lo + t * (hi - lo),
                    FluxGrid::Log => lo * (hi / lo).powf(t),
                }
            })
            .collect();
        if let Some(x) = out.last_mut() {
            *x = hi;
        }
        out
    }
}

impl std::str::FromStr for FluxGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(FluxGrid::Uniform),
            "log" => Ok(FluxGrid::Log),
            other => Err(format!("unknown grid `{other}` (expected uniform|log)")),
        }
    }
}

/// Sweep and noise settings for a simulated measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub f_min: f64,
    pub f_max: f64,
    pub n_points: usize,
    pub grid: FluxGrid,
    /// Standard deviation of additive Gaussian current noise, in J₀.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl SweepSpec {
    /// The flux window [1e-3, 1e-1] on 256 log-spaced points, noiseless.
    pub fn standard() -> Self {
        Self {
            f_min: 1e-3,
            f_max: 1e-1,
            n_points: 256,
            grid: FluxGrid::Log,
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

/// Simulated measurement of `J(f)` with ground truth attached as metadata.
pub fn synthesize_trace(
    ring: &RingSystem,
    spec: &SweepSpec,
) -> Result<CurrentTrace, PipelineError> {
    let mut trace = synthesize_reduced(&ring.reduced(), spec)?;
    let mut meta = trace.meta().clone();
    meta.ring_hint = Some(*ring);
    trace = CurrentTrace::new(trace.points().to_vec(), meta)?;
    Ok(trace)
}

/// Simulated measurement from reduced parameters only.
///
/// The sweep must stay on the principal branch of the ground state:
/// `f_max ≤ 1/2 − f_nc`, and for even rings also `f_min ≥ f_nc`.
pub fn synthesize_reduced(
    ring: &ReducedRing,
    spec: &SweepSpec,
) -> Result<CurrentTrace, PipelineError> {
    validate(ring, spec)?;
    let noise = if spec.noise_sigma > 0.0 {
        Some(
            Normal::new(0.0, spec.noise_sigma)
                .map_err(|e| PipelineError::InvalidRange(e.to_string()))?,
        )
    } else {
        None
    };
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let points = spec
        .grid
        .sample(spec.f_min, spec.f_max, spec.n_points)
        .into_iter()
        .map(|f| {
            let clean = persistent_current(ring, f);
            let j = match &noise {
                Some(dist) => clean + dist.sample(&mut rng),
                None => clean,
            };
            (f, j)
        })
        .collect();
    CurrentTrace::new(
        points,
        TraceMeta {
            source: TraceSource::Synthetic,
            seed: Some(spec.seed),
            noise_sigma: spec.noise_sigma,
            ring_hint: None,
        },
    )
}

fn validate(ring: &ReducedRing, spec: &SweepSpec) -> Result<(), PipelineError> {
    let bad = |msg: String| Err(PipelineError::InvalidRange(msg));
    if spec.n_points < MIN_TRACE_POINTS {
        return bad(format!(
            "need at least {MIN_TRACE_POINTS} points, got {}",
            spec.n_points
        ));
    }
    if !(spec.noise_sigma.is_finite() && spec.noise_sigma >= 0.0) {
        return bad(format!(
            "noise_sigma must be >= 0, got {}",
            spec.noise_sigma
        ));
    }
    if !(spec.f_min > 0.0 && spec.f_min < spec.f_max && spec.f_max.is_finite()) {
        return bad(format!(
            "need 0 < f_min < f_max, got [{}, {}]",
            spec.f_min, spec.f_max
        ));
    }
    let f_nc = ring.f_nc();
    if spec.f_max > 0.5 - f_nc {
        return bad(format!(
            "f_max = {} leaves the half flux zone (must be <= 1/2 - f_nc = {})",
            spec.f_max,
            0.5 - f_nc
        ));
    }
    if ring.parity() == Parity::Even && spec.f_min < f_nc {
        return bad(format!(
            "even ring crosses a level crossing at f = f_nc = {f_nc}; f_min must be >= f_nc"
        ));
    }
    Ok(())
}
