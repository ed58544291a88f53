//! File formats: trace CSV, run configuration, result reports and plots.
//!
//! All writers are deterministic: no timestamps, fixed key order and
//! locale-independent number formatting.

mod config;
mod format;
mod plot;
mod report;
mod trace_csv;

pub use config::{RunConfig, Units};
pub use format::{format_float, format_sci4};
pub use plot::{emit_plot, render_svg, Axes, Series};
pub use report::{render_report, write_results_report};
pub use trace_csv::{parse_trace_csv, read_trace_csv, render_trace_csv, write_trace_csv};

use std::path::PathBuf;

use crate::pipeline::PipelineError;

#[derive(Debug, thiserror::Error)]
pub enum DataIoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: flux is not strictly increasing")]
    NonMonotonicFlux { line: usize },
    #[error("unit mismatch: {0}")]
    UnitMismatch(String),
    #[error("plot needs at least one series with two or more points")]
    EmptySeries,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Trace(#[from] PipelineError),
}

impl DataIoError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        DataIoError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Write a complete text file.
pub fn write_text(path: &std::path::Path, contents: &str) -> Result<(), DataIoError> {
    write_file(path, contents)
}

pub(crate) fn write_file(path: &std::path::Path, contents: &str) -> Result<(), DataIoError> {
    std::fs::write(path, contents).map_err(|e| DataIoError::io(path, e))
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, DataIoError> {
    std::fs::read_to_string(path).map_err(|e| DataIoError::io(path, e))
}
