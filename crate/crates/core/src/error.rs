use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("distance matrix is not square: {rows} rows but row {row} has {cols} entries")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("metric axiom violated: {0}")]
    Metric(MetricViolation),

    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },

    #[error("operation needs planar coordinates, got {0}")]
    NotPlanar(String),

    #[error("filtration is not monotone at position {position}: {reason}")]
    NonMonotone { position: usize, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// The first metric axiom a distance matrix fails, with the offending indices.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricViolation {
    NonZeroDiagonal { i: usize, value: f64 },
    NonPositive { i: usize, j: usize, value: f64 },
    NotFinite { i: usize, j: usize },
    Asymmetric { i: usize, j: usize, dij: f64, dji: f64 },
    Triangle { p: usize, q: usize, r: usize, pr: f64, pq_qr: f64 },
}

impl std::fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NonZeroDiagonal { i, value } => write!(f, "d({i},{i}) = {value} is not zero"),
            Self::NonPositive { i, j, value } => {
                write!(f, "d({i},{j}) = {value} must be positive for distinct points")
            }
            Self::NotFinite { i, j } => write!(f, "d({i},{j}) is not finite"),
            Self::Asymmetric { i, j, dij, dji } => {
                write!(f, "d({i},{j}) = {dij} differs from d({j},{i}) = {dji}")
            }
            Self::Triangle { p, q, r, pr, pq_qr } => write!(
                f,
                "triangle inequality fails for ({p},{q},{r}): d({p},{r}) = {pr} > d({p},{q}) + d({q},{r}) = {pq_qr}"
            ),
        }
    }
}
