use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-domain input.
    #[error("input error: {0}")]
    Input(String),
    /// A numerical routine failed to converge or produced a non-finite value.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A structural hypothesis (lacunarity, gap profile, Hankel shape) does not hold.
    #[error("classification error: {0}")]
    Classification(String),
    /// A lower estimate exceeded an upper certificate.
    #[error("bracket violation: lower {lower:.12e} exceeds upper {upper:.12e} ({method})")]
    BracketViolation {
        lower: f64,
        upper: f64,
        method: String,
    },
    /// The greedy decomposition could not reduce the residual further.
    #[error("greedy stagnation after {accepted} atoms, residual energy {residual_energy:.6e}")]
    Stagnation {
        accepted: usize,
        residual_energy: f64,
        residual: Box<crate::symbols::TrigPolynomial>,
    },
    /// The requested lab experiment is not registered.
    #[error("unknown experiment `{name}`; registered: {known}")]
    UnknownExperiment { name: String, known: String },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
