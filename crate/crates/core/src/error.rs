use thiserror::Error;

/// Failures of the kernel. Variants that stand for a violated theorem are
/// reported by the CLI as internal assertions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{what} index {index} out of range (bound {bound})")]
    IndexOutOfRange { what: &'static str, index: usize, bound: usize },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("not regular: {0}")]
    NotRegularEvidence(String),
    #[error("nu does not lift to a well-defined derivation: {0}")]
    NoLift(String),
    #[error("extension data violates: {}", .0.iter().map(|v| v.name.as_str()).collect::<Vec<_>>().join(", "))]
    Validation(Vec<Violation>),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("Hilbert series mismatch in degree {degree}: dim B = {got}, expected {expected}")]
    HilbertMismatch { degree: usize, got: usize, expected: usize },
    #[error("degree-2 split failed: {0}")]
    SplitFailure(String),
    #[error("containment failed: {0}")]
    ContainmentFailure(String),
    #[error("twisting map not unique or absent: {0}")]
    NonUniqueOrNone(String),
    #[error("not proportional to omega: {0}")]
    NotProportional(String),
    #[error("factorization against omega failed: {0}")]
    FactorizationFailure(String),
    #[error("automorphism check failed: {0}")]
    AutomorphismCheckFailure(String),
    #[error("derivation quotient span mismatch: {0}")]
    SpanMismatch(String),
    #[error("complex broken: d∘d ≠ 0 at position {position}, internal degree {degree}")]
    ComplexBroken { position: usize, degree: usize },
    #[error("not exact at position {position}, internal degree {degree}")]
    NotExact { position: usize, degree: usize },
    #[error("not minimal at position {position}")]
    NotMinimal { position: usize },
}

/// One failed extension condition with a human-readable witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub name: String,
    pub witness: String,
}

impl Error {
    /// True for errors that mean the input data is outside the hypotheses,
    /// as opposed to a guaranteed property failing.
    pub fn is_input_rejection(&self) -> bool {
        matches!(
            self,
            Error::NotRegularEvidence(_) | Error::NoLift(_) | Error::Validation(_) | Error::NotInvertible(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
