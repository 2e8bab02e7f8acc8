use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot compose {left} -> {mid} with {mid2} -> {right}")]
    Compose {
        left: usize,
        mid: usize,
        mid2: usize,
        right: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("integer overflow in exact arithmetic")]
    Arithmetic,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("level {requested} exceeds the construction bound {bound}")]
    LevelBound { requested: usize, bound: usize },

    #[error("supplied permutation is not a completion of the injection")]
    Completion,

    #[error("colimit not stabilized at level {0}")]
    NotStabilized(usize),

    #[error(
        "coinvariant quotient has torsion in D-degree {0}; cannot materialize as a free complex"
    )]
    Torsion(i64),

    #[error("invalid structure: {0}")]
    Invalid(String),

    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
