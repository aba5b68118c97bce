use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("population has N = {0} units; N < 2 leaves the N-1 variance divisor undefined")]
    TooFewUnits(usize),

    #[error("mean of {0} is zero; coefficient of variation undefined")]
    ZeroMean(&'static str),

    #[error("variance of z is zero; beta1(z) and beta2(z) are undefined")]
    ZeroVarianceZ,

    #[error("summary file: missing key `{0}`")]
    MissingKey(String),

    #[error("summary file: `{key}`: {reason}")]
    InvalidValue { key: String, reason: String },

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("design has N = {design} but population has {population} units")]
    SizeMismatch { design: usize, population: usize },

    #[error("transform for {estimator}: a = 0 after substitution")]
    DegenerateTransform { estimator: &'static str },

    #[error("zero denominator: {0}")]
    ZeroDenominator(&'static str),

    #[error("theta = 1: the combination direction vanishes, alpha_opt is undefined")]
    ThetaIsOne,

    #[error("target correlation matrix is not positive semi-definite")]
    NotPositiveSemidefinite,

    #[error("{count} two-phase outcomes exceed the enumeration guard of {limit}")]
    TooManyOutcomes { count: u128, limit: u128 },

    #[error("{estimator}: degenerate outcome ({reason})")]
    DegenerateOutcome { estimator: String, reason: String },

    #[error("{estimator}: rejected {rejected} of {total} replications, above the 0.1% ceiling")]
    RejectionCeiling {
        estimator: String,
        rejected: u64,
        total: u64,
    },

    #[error("estimator set mismatch: {0}")]
    EstimatorMismatch(String),

    #[error("unknown estimator `{0}`")]
    UnknownEstimator(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("serialization: {0}")]
    Serialize(String),
}

impl Error {
    /// Process exit code: 1 validation, 2 data, 3 numeric guard.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidDesign(_)
            | Error::SizeMismatch { .. }
            | Error::DegenerateTransform { .. }
            | Error::ThetaIsOne
            | Error::NotPositiveSemidefinite
            | Error::EstimatorMismatch(_)
            | Error::UnknownEstimator(_)
            | Error::InvalidConfig(_) => 1,
            Error::Io(_)
            | Error::Parse { .. }
            | Error::TooFewUnits(_)
            | Error::ZeroMean(_)
            | Error::ZeroVarianceZ
            | Error::MissingKey(_)
            | Error::InvalidValue { .. }
            | Error::ZeroDenominator(_)
            | Error::Serialize(_) => 2,
            Error::TooManyOutcomes { .. }
            | Error::DegenerateOutcome { .. }
            | Error::RejectionCeiling { .. } => 3,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialize(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serialize(e.to_string())
    }
}
