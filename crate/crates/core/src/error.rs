use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("degree p = {p} out of range: {reason}")]
    DegreeOutOfRange { p: usize, reason: String },

    #[error("linearly dependent input: {0}")]
    Dependent(String),

    #[error("the class is zero")]
    ZeroClass,

    #[error("the tensor is not annihilated by the Koszul differential")]
    NotACycle,

    #[error("four-term relation violated for basis indices {0:?}")]
    FourTermViolation([usize; 4]),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unhandled base locus of degree {degree}: {divisor}")]
    BaseLocus { degree: usize, divisor: String },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command-line surface: 2 for violated
    /// mathematical preconditions, 3 for malformed, unreadable or
    /// dimensionally inconsistent input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Malformed(_)
            | Error::Json(_)
            | Error::Io(_)
            | Error::DimensionMismatch(_)
            | Error::IndexOutOfRange(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
