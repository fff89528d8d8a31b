use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field elements belong to different moduli ({0} vs {1})")]
    ModulusMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid modulus {0}: {1}")]
    InvalidModulus(u64, &'static str),
    #[error("value {value} is not a canonical residue mod {modulus}")]
    NonCanonical { value: u64, modulus: u64 },
    #[error("duplicate evaluation point {0}")]
    DuplicatePoint(u64),
    #[error("interpolation needs at least one sample")]
    EmptySamples,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
    #[error("constraint system has no nonzero solution")]
    NoSolution,
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeError { expected: usize, got: usize },
    #[error("only {got} servers responded, {need} required")]
    InsufficientResponses { got: usize, need: usize },
    #[error("oracle instance too large: {0}")]
    OracleTooLarge(String),
    #[error("malformed wire message: {0}")]
    WireFormat(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("correctness violation at trial {trial} (seed {seed:#018x}): x_i missing from output list")]
    CorrectnessViolation { trial: u64, seed: u64 },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
