use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u64),
    #[error("extension modulus is not a monic irreducible of degree {0}")]
    ReducibleModulus(u32),
    #[error("unsupported field size: {0}")]
    UnsupportedFieldSize(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("coefficient {value} out of range for characteristic {p}")]
    CoefficientOutOfRange { value: String, p: u32 },
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("moduli are not pairwise coprime")]
    NonCoprimeModuli,
    #[error("exhaustive limit exceeded: {needed} residues, limit is 2^{limit_bits}")]
    ExhaustiveLimitExceeded { needed: String, limit_bits: u32 },
    #[error("level {level} out of range 1..={levels}")]
    LevelOutOfRange { level: usize, levels: usize },
    #[error("schedule shape invalid: {0}")]
    ScheduleShapeInvalid(String),
    #[error("invalid distortion parameter {0}: must lie in [0, 1/2]")]
    InvalidDelta(String),
    #[error("schedule has {got} entries but the tower has {expected} levels")]
    ScheduleLength { expected: usize, got: usize },
    #[error("empty covering system")]
    EmptySystem,
    #[error("system file line {line}: {message}")]
    SystemFile { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
