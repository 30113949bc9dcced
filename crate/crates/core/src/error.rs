use std::path::PathBuf;

use crate::recon::ReconReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    Dimension(String),

    #[error("grid of {height}x{width} is not a multiple of block size {block}; pad it first")]
    Tiling {
        height: usize,
        width: usize,
        block: usize,
    },

    #[error("block assembly failed: {0}")]
    Assembly(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("non-finite value {value} at ({row}, {col})")]
    NonFinite { row: usize, col: usize, value: f64 },

    /// The solver produced a non-finite objective.
    #[error("reconstruction diverged{} after {} iterations", origin_suffix(.origin), .report.iterations)]
    Divergence {
        origin: Option<(usize, usize)>,
        report: Box<ReconReport>,
    },

    #[error("{path}: bad {field}: {reason}")]
    Format {
        path: PathBuf,
        field: &'static str,
        reason: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn origin_suffix(origin: &Option<(usize, usize)>) -> String {
    match origin {
        Some((r, c)) => format!(" in block at ({r}, {c})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
