use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown point label `{0}`")]
    UnknownPoint(String),

    #[error("duplicate point label `{0}`")]
    DuplicatePoint(String),

    #[error("point index {index} out of range for a space with {len} points")]
    PointOutOfRange { index: usize, len: usize },

    #[error("distance matrix must be {expected}x{expected}, row {row} has {found} entries")]
    MatrixShape {
        expected: usize,
        row: usize,
        found: usize,
    },

    #[error("metric axiom violated: {0}")]
    Metric(String),

    #[error("invalid rational `{0}`")]
    Rational(String),

    #[error("invalid measure: {0}")]
    Measure(String),

    #[error("invalid partial map `{name}`: {reason}")]
    Map { name: String, reason: String },

    #[error("generating system: {0}")]
    System(String),

    #[error("generator `{0}` has no core")]
    MissingCore(String),

    #[error("cover does not contain point `{0}`")]
    NotACover(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("capability limit: {0}")]
    Capability(String),

    #[error(
        "word closure built to depth {built} without stabilizing, length {requested} requested"
    )]
    DepthExceeded { built: usize, requested: usize },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
