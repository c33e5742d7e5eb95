use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Exit category reported by the command line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCategory {
    Usage,
    Numerical,
    Resource,
}

impl ExitCategory {
    pub fn code(self) -> i32 {
        match self {
            ExitCategory::Usage => 2,
            ExitCategory::Numerical => 3,
            ExitCategory::Resource => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("group mismatch: {left} vs {right}")]
    GroupMismatch { left: String, right: String },
    #[error("group {0} lies outside the supported hypotheses (polynomial growth); pass the override flag to use it")]
    OutOfHypothesis(String),
    #[error("element {element} lies beyond the enumerated radius {radius}")]
    OutOfRadius { element: String, radius: usize },
    #[error("radius {requested} exceeds the configured maximum {max}")]
    RadiusLimit { requested: usize, max: usize },
    #[error("ball enumeration exceeded {limit} elements at radius {radius} (partial size {size})")]
    ResourceLimit { radius: usize, size: usize, limit: usize },
    #[error("support would reach radius {needed}, beyond the limit {limit}")]
    Truncation { needed: usize, limit: usize },
    #[error("CD norm {norm} is not below 1; the Neumann series is not certified")]
    NotContractive { norm: f64 },
    #[error("section of radius {radius} is numerically singular (pivot {pivot:e}, scale {scale:e})")]
    SingularSection { radius: usize, pivot: f64, scale: f64 },
    #[error("iteration did not converge after {iterations} steps (last value {last})")]
    NonConvergence { iterations: usize, last: f64 },
    #[error("property check failed: {0}")]
    CheckFailed(String),
    #[error("certified region is empty")]
    EmptyRegion,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn category(&self) -> ExitCategory {
        match self {
            Error::Usage(_)
            | Error::Parse(_)
            | Error::GroupMismatch { .. }
            | Error::OutOfHypothesis(_)
            | Error::NotContractive { .. }
            | Error::InsufficientData(_)
            | Error::Csv(_)
            | Error::Json(_) => ExitCategory::Usage,
            Error::SingularSection { .. }
            | Error::NonConvergence { .. }
            | Error::CheckFailed(_)
            | Error::EmptyRegion => {
                ExitCategory::Numerical
            }
            Error::OutOfRadius { .. }
            | Error::RadiusLimit { .. }
            | Error::ResourceLimit { .. }
            | Error::Truncation { .. }
            | Error::Io(_) => ExitCategory::Resource,
        }
    }
}
