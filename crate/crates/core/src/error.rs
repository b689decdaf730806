use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic must be prime (got {0})")]
    NotPrime(u64),

    #[error("characteristic {0} is outside the supported range 2..=2^31-1")]
    CharacteristicOutOfRange(u64),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("polynomial has {found} variables, ring has {expected}")]
    VariableCount { expected: usize, found: usize },

    #[error("coefficient fields differ (F_{left} vs F_{right})")]
    FieldMismatch { left: u32, right: u32 },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("graded piece of degree {degree} has {size} ambient monomials, above the cap of {cap}")]
    ResourceCap { degree: u32, size: usize, cap: usize },

    #[error("degree {degree} exceeds the degree cap {cap}")]
    DegreeCap { degree: u64, cap: u32 },

    #[error("computation cancelled")]
    Cancelled,

    #[error("generators do not form a primary ideal")]
    NotPrimary,

    #[error("inconclusive: search degree {n_max} is below the largest generator degree {max_degree}")]
    Inconclusive { n_max: u32, max_degree: u32 },

    #[error("class is not an Artin-Schreier coboundary at this Frobenius level")]
    NotACoboundary,

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
