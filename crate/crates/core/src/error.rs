use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix does not define a morphism: {0}")]
    NotWellDefined(String),
    #[error("object outside the category ({predicate}): {detail}")]
    PredicateViolation { predicate: String, detail: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("predicate {0} has no quotient coreflection")]
    NoCoreflection(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant breached: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
