use thiserror::Error;

/// Errors produced by moment construction, factorization and image I/O.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty request: {0}")]
    EmptyRequest(&'static str),

    #[error("function oracle returned a non-finite value at {at}")]
    NonFiniteSample { at: f64 },

    #[error("insufficient vector moments: need {needed} per axis, got {got}")]
    InsufficientMoments { needed: usize, got: usize },

    #[error("matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("moment sets were built over different measures or bases")]
    MismatchedMeasure,

    #[error("pixel grid must be at least 2x2, got {width}x{height}")]
    DegenerateGrid { width: usize, height: usize },

    #[error("eigenvalue {value} lies outside the histogram range")]
    OutOfRange { value: f64 },

    #[error("invalid histogram edges: {0}")]
    InvalidEdges(&'static str),

    #[error("PGM: bad magic number")]
    BadMagic,

    #[error("PGM: malformed header: {0}")]
    BadHeader(String),

    #[error("PGM: maxval {0} is not in 1..=255")]
    BadMaxval(u32),

    #[error("PGM: truncated payload, expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("PGM: sample {sample} exceeds maxval {maxval}")]
    SampleOutOfRange { sample: u8, maxval: u32 },
}

impl Error {
    /// True for failures of the numerical pipeline, as opposed to malformed input data.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonFiniteSample { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::NoConvergence { .. }
                | Error::MismatchedMeasure
                | Error::InsufficientMoments { .. }
                | Error::OutOfRange { .. }
        )
    }

    pub(crate) fn shape(expected: impl ToString, got: impl ToString) -> Self {
        Error::ShapeMismatch {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
