use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("d∘d ≠ 0 at degree {degree}")]
    NotAComplex { degree: i32 },

    #[error("not a chain map at degree {degree}")]
    NotAChainMap { degree: i32 },

    #[error("Σ_{n} relation {relation} fails in degree {degree}")]
    Relation {
        n: usize,
        relation: String,
        degree: i32,
    },

    #[error("arity bound mismatch: {0} vs {1}")]
    ArityBound(usize, usize),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("algebra presentation rejected: {0}")]
    Algebra(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
