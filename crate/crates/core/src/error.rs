use std::path::PathBuf;

use crate::tessellation::PartitionReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("grid side must be at least 2, got {0}")]
    SideTooSmall(usize),

    #[error("cell count {0} is not a perfect square")]
    NotSquare(usize),

    #[error("{what}: {divisor} does not divide {side}")]
    NotDivisible {
        what: &'static str,
        divisor: usize,
        side: usize,
    },

    #[error("tile size must be positive")]
    ZeroTile,

    #[error("marked set is empty")]
    EmptyMarked,

    #[error("marked cell ({0}, {1}) listed twice")]
    DuplicateMarked(usize, usize),

    #[error("marked cell ({i}, {j}) lies outside the {side}x{side} grid")]
    MarkedOutOfRange { i: i64, j: i64, side: usize },

    #[error("operator built for side {expected} applied to a side {found} grid")]
    GeometryMismatch { expected: usize, found: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(PartitionReport),

    #[error("dense materialization of {n} cells exceeds the cap of {cap}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("trace is empty")]
    EmptyTrace,

    #[error("scaling fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("scaling fit requires positive values, got ({0}, {1})")]
    NonPositive(f64, f64),

    #[error("multi-marked summary needs at least 2 marked cells, got {0}")]
    SingleMarked(usize),

    #[error("marked count {marked} must be below the item count {n}")]
    TooManyMarked { marked: usize, n: usize },

    #[error("norm drifted to {norm_sq} after {applications} operator applications")]
    NormDrift { norm_sq: f64, applications: u64 },

    #[error("schedule is empty")]
    EmptySchedule,

    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
