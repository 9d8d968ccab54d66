use thiserror::Error;

/// Errors raised by the exact-arithmetic and lattice layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("scalar is not a single monomial ({0} terms)")]
    NotAMonomial(usize),
    #[error("zero coefficient cannot be inverted")]
    ZeroCoefficient,
    #[error("variable {0} is assigned zero")]
    ZeroAssignment(&'static str),
    #[error("variable {0} occurs but has no assignment")]
    MissingAssignment(&'static str),
    #[error("scalar has a nonzero sqrt(q) part and no value for r was supplied")]
    ResidualSqrtQ,
    #[error("element is not a unit of O (valuation {0})")]
    NotAUnit(i64),
    #[error("generator matrix is singular")]
    SingularGenerators,
    #[error("element is not invertible in the etale algebra")]
    NotInvertible,
    #[error("precision {precision} does not exceed det valuation {det_val}")]
    PrecisionExhausted { precision: u32, det_val: i64 },
    #[error("symmetric matrix must have entries in O and nonzero determinant")]
    NotIntegralForm,
    #[error("eigenvalue must be nonzero")]
    ZeroEigenvalue,
    #[error("truncation bound {0} is too small (need D >= 2)")]
    TruncationTooSmall(u32),
    #[error("{0} is not an odd prime")]
    BadModulus(u64),
    #[error("character parameters: {0}")]
    BadCharacter(String),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
}

pub type Result<T> = std::result::Result<T, Error>;
