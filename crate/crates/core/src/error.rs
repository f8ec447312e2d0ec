use thiserror::Error;

use crate::report::CheckReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("space mismatch: expected `{expected}`, found `{found}`")]
    SpaceMismatch { expected: String, found: String },

    #[error("degree {degree} exceeds the configured cutoff {cutoff}")]
    CutoffExceeded { degree: usize, cutoff: usize },

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("input is not a Courant algebroid ({} violations)", .0.violations.len())]
    NotCourant(CheckReport),

    #[error("input is not a 1-truncated conformal algebra ({} violations)", .0.violations.len())]
    NotConformal(CheckReport),

    #[error("compatibility conditions fail ({} violations)", .0.violations.len())]
    Incompatible(CheckReport),

    #[error("graded view invariant violated in `{map}`: {message}")]
    Grading { map: String, message: String },

    #[error("rewriting did not terminate within {0} steps")]
    RewriteBound(usize),

    #[error("{0}")]
    Structure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
