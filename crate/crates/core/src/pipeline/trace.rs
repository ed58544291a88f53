use super::PipelineError;
use crate::model::RingSystem;

/// Minimum number of samples needed to differentiate and fit a trace.
pub const MIN_TRACE_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceSource {
    Synthetic,
    Ingested,
}

impl TraceSource {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceSource::Synthetic => "synthetic",
            TraceSource::Ingested => "ingested",
        }
    }
}

impl std::str::FromStr for TraceSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "synthetic" => Ok(TraceSource::Synthetic),
            "ingested" => Ok(TraceSource::Ingested),
            other => Err(format!("unknown trace source `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceMeta {
    pub source: TraceSource,
    pub seed: Option<u64>,
    /// Standard deviation of the additive current noise, in J₀.
    pub noise_sigma: f64,
    /// Ground truth for synthetic traces. Blind analysis ignores it.
    pub ring_hint: Option<RingSystem>,
}

impl Default for TraceMeta {
    fn default() -> Self {
        Self {
            source: TraceSource::Ingested,
            seed: None,
            noise_sigma: 0.0,
            ring_hint: None,
        }
    }
}

/// Persistent current sampled against reduced flux, `(f_i, J_i / J₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentTrace {
    points: Vec<(f64, f64)>,
    meta: TraceMeta,
}

impl CurrentTrace {
    /// Validates: at least 8 points, all finite, `f` positive and strictly
    /// increasing.
    pub fn new(points: Vec<(f64, f64)>, meta: TraceMeta) -> Result<Self, PipelineError> {
        if points.len() < MIN_TRACE_POINTS {
            return Err(PipelineError::TooFewPoints {
                needed: MIN_TRACE_POINTS,
                got: points.len(),
            });
        }
        for (i, &(f, j)) in points.iter().enumerate() {
            if !f.is_finite() || !j.is_finite() {
                return Err(PipelineError::InvalidTrace(format!(
                    "non-finite sample at index {i}"
                )));
            }
            if f <= 0.0 {
                return Err(PipelineError::InvalidTrace(format!(
                    "flux must be positive, got {f} at index {i}"
                )));
            }
            if i > 0 && f <= points[i - 1].0 {
                return Err(PipelineError::InvalidTrace(format!(
                    "flux not strictly increasing at index {i}"
                )));
            }
        }
        Ok(Self { points, meta })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn meta(&self) -> &TraceMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn flux(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn current(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    /// Same samples with the ground-truth hint removed.
    pub fn blinded(&self) -> Self {
        let mut out = self.clone();
        out.meta.ring_hint = None;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(n: usize) -> Vec<(f64, f64)> {
        (1..=n)
            .map(|i| (i as f64 * 0.01, -0.06 * i as f64))
            .collect()
    }

    #[test]
    fn validation() {
        assert!(CurrentTrace::new(pts(8), TraceMeta::default()).is_ok());
        assert!(matches!(
            CurrentTrace::new(pts(7), TraceMeta::default()),
            Err(PipelineError::TooFewPoints { needed: 8, got: 7 })
        ));
        let mut p = pts(10);
        p[4].0 = p[3].0;
        assert!(CurrentTrace::new(p, TraceMeta::default()).is_err());
        let mut p = pts(10);
        p[0].0 = 0.0;
        assert!(CurrentTrace::new(p, TraceMeta::default()).is_err());
        let mut p = pts(10);
        p[2].1 = f64::NAN;
        assert!(CurrentTrace::new(p, TraceMeta::default()).is_err());
    }
}
