use thiserror::Error;

/// Errors produced by the library.
///
/// Variants map one-to-one onto the precondition failures of the public
/// operations. The CLI classifies them as input errors (exit code 3).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: u64 },
    #[error("group order {0} is not prime")]
    NotPrime(u64),
    #[error("group order must be at least 2, got {0}")]
    OrderTooSmall(u64),
    #[error("the zero element is not allowed here")]
    ZeroElement,
    #[error("residue {residue} is out of range for order {order}")]
    ResidueOutOfRange { residue: u64, order: u64 },
    #[error("element sets must be nonempty")]
    EmptySet,
    #[error("value {0} is outside the admissible range")]
    OutOfRange(String),
    #[error("coordinate {0} of the right-hand side is zero (or out of bounds)")]
    ZeroCoordinate(usize),
    #[error("function is not subadditive")]
    NotSubadditive,
    #[error("function does not vanish at the origin")]
    OriginNotZero,
    #[error("function is identically zero")]
    IdenticallyZero,
    #[error("function is not nondecreasing")]
    NotNondecreasing,
    #[error("function is not minimal")]
    NotMinimal,
    #[error("function is not in the class of nondecreasing symmetric subadditive torus functions")]
    NotInClassG,
    #[error("group order {q} exceeds the vertex enumeration cap {cap}")]
    DimensionCap { q: u64, cap: u64 },
    #[error("column fraction {0} does not lie on the group grid")]
    GridMismatch(String),
    #[error("row right-hand side {row} does not match the function's right-hand side {function}")]
    RhsMismatch { row: String, function: String },
    #[error("invalid function data: {0}")]
    InvalidFunction(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polytope is empty or unbounded: {0}")]
    DegeneratePolytope(String),
}

pub type Result<T> = std::result::Result<T, Error>;
