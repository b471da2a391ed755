use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix has a negative eigenvalue {0:.3e}")]
    NegativeEigenvalue(f64),

    #[error("trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("state vector has squared norm {0}, expected 1")]
    BadNorm(f64),

    #[error("Kraus operators are not complete (deviation {0:.3e})")]
    IncompleteKraus(f64),

    #[error("{name} = {value} is outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("subsystem selection is invalid: {0}")]
    InvalidSubsystems(String),

    #[error("{0} channel uses exceeds the supported limit of {1}")]
    TooManyUses(usize, usize),

    #[error("the zero vector cannot be normalized into a code state")]
    ZeroVector,

    #[error("no antidegrading map is constructed for q = {q} < k(p) = {k}")]
    NotAntidegradableHere { q: f64, k: f64 },

    #[error("witness search underflowed at p = {p}, q = {q}")]
    UnderflowAtParams { p: f64, q: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            domain: "[0, 1]",
        })
    }
}
