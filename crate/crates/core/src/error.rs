use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("even characteristic unsupported")]
    EvenCharacteristic,
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {0} exceeds the table limit of 2^20 elements")]
    TooLarge(String),
    #[error("zero is not invertible")]
    ZeroNotInvertible,
    #[error("zero has no discrete logarithm")]
    ZeroHasNoLogarithm,
    #[error("F_{q} has no primitive fourth root of unity (q is not 1 mod 4)")]
    NoFourthRootOfUnity { q: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u64, u64),
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("expected {expected} coefficients for conductor {m}, got {got}")]
    WrongLength { m: u64, expected: usize, got: usize },
    #[error("invalid rational coefficient {0:?}")]
    BadRational(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid field descriptor {0:?}")]
    FieldDescriptor(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid character {0:?}")]
    Character(String),
    #[error("invalid field element {0:?}")]
    Element(String),
    #[error("unknown identity {0:?}")]
    Identity(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PochhammerError {
    #[error("series does not terminate: no upper parameter is a non-positive integer")]
    NonTerminating,
    #[error("lower parameter {0} hits a non-positive integer within the termination range")]
    LowerParameterPole(String),
    #[error("clearing power {power} is below the series length {length}")]
    ClearingPowerTooSmall { power: usize, length: usize },
    #[error("n must be non-negative")]
    NegativeOrder,
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("could not build worker pool: {0}")]
    Pool(String),
}
