use thiserror::Error;

/// Unified error type for the whole engine.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("not a unit: {0}")]
    NotAUnit(String),

    #[error("division by zero scalar")]
    DivisionByZero,

    #[error("theta is not closed: d(theta) != 0")]
    ThetaNotClosed,

    #[error("theta must be a 1-form, got degree {0}")]
    ThetaDegree(usize),

    #[error("f must be a function (degree 0 form or polynomial)")]
    NotAFunction,

    #[error("torus dimension {0} is odd; the complex splitting needs an even dimension")]
    OddDimension(usize),

    #[error("translation entry {0} has unsupported denominator; only 1, 2 and 4 keep phases in the ring")]
    UnsupportedTranslation(String),

    #[error("map shape mismatch: matrix is {rows}x{cols}, translation has length {tlen}")]
    MapShape { rows: usize, cols: usize, tlen: usize },

    #[error("growth bound violated: image of basis element {element} leaves the cutoff {cutoff}")]
    GrowthBound { element: String, cutoff: i64 },

    #[error("complex property violated at {0}")]
    ComplexProperty(String),

    #[error("chain map property violated at {0}")]
    ChainMap(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("fixture invariant violated: {0}")]
    FixtureInvariant(String),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    /// Process exit code class: 2 for rejected input/configuration, 1 for
    /// mathematical failures detected while computing.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::Config(_)
            | Error::UnknownFixture(_)
            | Error::UnknownSuite(_)
            | Error::DimMismatch(..)
            | Error::AxisOutOfRange { .. }
            | Error::DegreeMismatch(..)
            | Error::ThetaDegree(_)
            | Error::NotAFunction
            | Error::OddDimension(_)
            | Error::UnsupportedTranslation(_)
            | Error::MapShape { .. } => 2,
            _ => 1,
        }
    }
}
