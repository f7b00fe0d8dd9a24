use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid exponent vector: {0}")]
    InvalidExponent(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("link dimension {dim} is too low for {what} (needs at least {min})")]
    DimensionTooLow {
        what: &'static str,
        dim: usize,
        min: usize,
    },

    #[error("{what} needs exactly {expected} exponents, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("signature lattice count needs a 7-dimensional link (5 exponents), got {0} exponents")]
    NotDim7(usize),

    #[error("work estimate {needed} exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("{cover}-fold cover of period {period} lies in a larger Morse-Bott family (exponent {exponent} divides {total})")]
    NotMorseBottCover {
        period: u64,
        cover: u64,
        exponent: u64,
        total: u64,
    },

    #[error("period {0} is not the minimal period of a stratum")]
    NotAStratumPeriod(u64),

    #[error("principal Maslov index vanishes")]
    ZeroPrincipalIndex,

    #[error("spectral sequence is not lacunary in degrees {k_lo}..={k_hi}")]
    NotLacunary { k_lo: i64, k_hi: i64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("invalid sweep instance: {0}")]
    InvalidInstance(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("schema error: {0}")]
    Schema(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
