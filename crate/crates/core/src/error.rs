use thiserror::Error;

/// Why an elimination left a non-zero residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidualKind {
    /// The leading support point needs a basis element longer than the bound.
    BoundExceeded { needed: usize, bound: usize },
    /// The expansion of the pivot element does not contain its own diagonal point.
    DiagonalMissing,
    /// A linear system was overdetermined and one of the spare equations failed.
    Inconsistent,
    /// The loop ran past its iteration guard.
    NoProgress,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid root system {label}{rank}")]
    InvalidType { label: char, rank: usize },

    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("linear form is zero")]
    ZeroForm,

    #[error("division by a numerator that is not a product of linear forms: {0}")]
    DivisionByNonLinearProduct(String),

    #[error("not a polynomial: {0}")]
    NotPolynomial(String),

    #[error("word {0:?} is not reduced")]
    NonReducedWord(Vec<usize>),

    #[error("{0} is not a minimal length coset representative")]
    NotCosetMinimal(String),

    #[error("{0} is not a minimal length representative for the parabolic")]
    NotInWP(String),

    #[error("simple index {0} lies in the parabolic subset")]
    IndexInParabolic(usize),

    #[error("elimination left a non-zero residual ({kind:?}): {detail}")]
    ResidualNonzero { kind: ResidualKind, detail: String },

    #[error("quantum recursion stuck at length {length}: divisor products do not span")]
    RecursionStuck { length: usize },

    #[error("enumeration cap exceeded: length {requested} > {cap} at rank {rank}")]
    EnumerationCap {
        requested: usize,
        cap: usize,
        rank: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("while computing {u} * {v}: {source}")]
    AtPair {
        u: String,
        v: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True when the error stems from bad input rather than a failed internal check.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::InvalidType { .. }
            | Error::RankMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::NonReducedWord(_)
            | Error::NotCosetMinimal(_)
            | Error::NotInWP(_)
            | Error::IndexInParabolic(_)
            | Error::EnumerationCap { .. }
            | Error::Parse(_) => true,
            Error::AtPair { source, .. } => source.is_usage(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
