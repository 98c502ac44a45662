//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in a computation.
///
/// Infeasibility of a linear program is *not* an error: it is reported as a
/// certificate. Errors are reserved for malformed input, unsupported
/// configurations and genuine numerical breakdown.
#[derive(Debug, Error)]
pub enum Error {
    /// Two objects that must live in the same space do not.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The zero cone or the whole space was supplied where a proper cone is required.
    #[error("degenerate cone: {0}")]
    DegenerateCone(String),

    /// A cone that is not proper (not full-dimensional, not pointed, or with
    /// inconsistent generator/facet descriptions).
    #[error("cone is not proper: {0}")]
    NotProper(String),

    /// An LP-based operation was invoked on a model whose cone is not polyhedral.
    #[error("operation requires a polyhedral model, but `{0}` is non-polyhedral")]
    NonPolyhedral(String),

    /// A closed-form routine was invoked on a model it does not apply to.
    #[error("operation requires a {required} model, got `{found}`")]
    WrongModel { required: &'static str, found: String },

    /// A size limit guarding exponential enumeration was exceeded.
    #[error("size limit exceeded for {what}: {value} > {limit}")]
    LimitExceeded { what: &'static str, value: usize, limit: usize },

    /// A parameter outside its admissible range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A measurement or effect that fails validation where a valid one is required.
    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    /// The candidate tuple is not an incompatibility witness.
    #[error("the given tuple is not an incompatibility witness")]
    NotAWitness,

    /// The simplex method hit its pivot limit, or a certificate failed re-verification.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// An unrecognised tag, e.g. for a normed space.
    #[error("unknown tag `{0}`")]
    UnknownTag(String),

    /// Malformed JSON input.
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by numerical breakdown rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalFailure(_))
    }
}

/// Returns an error unless `found == expected`.
pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
