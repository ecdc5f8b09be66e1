use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lie algebra is not nilpotent")]
    NotNilpotent,
    #[error("lie algebra is not solvable")]
    NotSolvable,
    #[error("subspace is not an ideal: bracket of {element} with {ideal_vector} leaves it")]
    NotAnIdeal { element: String, ideal_vector: String },
    #[error("functional is not a character: it does not vanish on the derived subalgebra")]
    NotACharacter,
    #[error("characteristic polynomial does not split over the Gaussian rationals: {0}")]
    ExactFactorizationFailure(String),
    #[error("Koszul space of dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("complex is not split in degree {degree}: homology has dimension {betti}")]
    NotSplit { degree: usize, betti: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid spectrum kind: {0}")]
    InvalidKind(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("cannot parse scalar `{0}`")]
    ScalarSyntax(String),
    #[error("malformed input at `{path}`: {message}")]
    Input { path: String, message: String },
}

impl Error {
    /// Input errors are the caller's fault (bad file, bad text); the rest are
    /// mathematical or precondition failures.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Input { .. } | Error::ScalarSyntax(_) | Error::InvalidKind(_))
    }
}
