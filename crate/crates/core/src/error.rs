use thiserror::Error;

/// Errors raised by the library. Verdict-level negatives (a module that is
/// not Koszul, an invalid certificate) are reported as values, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCountMismatch(usize, usize),
    #[error("monomial order mismatch")]
    OrderMismatch,
    #[error("{0} is not a prime in [2, 2^31)")]
    NotPrime(u64),
    #[error("non-homogeneous input: {0}")]
    NonHomogeneous(String),
    #[error("degree-1 generator {0}: eliminate the variable instead")]
    LinearGenerator(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("module is generated in several degrees {0:?}")]
    MixedGeneration(Vec<i32>),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("bounds out of range: {0}")]
    Bounds(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("fixture hypothesis mismatch: {0}")]
    HypothesisMismatch(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
