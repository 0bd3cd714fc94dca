use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrmError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("prime {0} is not supported (supported: 2, 3, 5, 7)")]
    UnsupportedPrime(u32),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("variable index {index} out of range 1..={m}")]
    VariableOutOfRange { index: usize, m: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("field element {value} out of range for p = {p}")]
    ElementOutOfRange { value: u32, p: u8 },
    #[error("budget exceeded for {what}: required {required}, limit {limit}")]
    BudgetExceeded {
        what: String,
        required: String,
        limit: u64,
    },
    #[error("linear part of the affine map is singular over F_{p}")]
    SingularMap { p: u8 },
    #[error("parameter mismatch: {0}")]
    ParamsMismatch(String),
    #[error("merged spectrum totals {got} codewords, expected {expected}")]
    LostPartition { expected: String, got: String },
    #[error("invalid rational {0:?}")]
    InvalidRational(String),
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("alphabet mismatch: {0} vs {1} symbols")]
    AlphabetMismatch(usize, usize),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency violation: {0}")]
    Internal(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl GrmError {
    /// Stable machine-readable tag used in CLI error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            GrmError::NotPrime(_) => "not_prime",
            GrmError::UnsupportedPrime(_) => "unsupported_prime",
            GrmError::Parse { .. } => "parse",
            GrmError::VariableOutOfRange { .. } => "variable_out_of_range",
            GrmError::DimensionMismatch { .. } => "dimension_mismatch",
            GrmError::ElementOutOfRange { .. } => "element_out_of_range",
            GrmError::BudgetExceeded { .. } => "budget_exceeded",
            GrmError::SingularMap { .. } => "singular_map",
            GrmError::ParamsMismatch(_) => "params_mismatch",
            GrmError::LostPartition { .. } => "lost_partition",
            GrmError::InvalidRational(_) => "invalid_rational",
            GrmError::InvalidTarget(_) => "invalid_target",
            GrmError::AlphabetMismatch(..) => "alphabet_mismatch",
            GrmError::InvalidOrder(_) => "invalid_order",
            GrmError::InvalidArgument(_) => "invalid_argument",
            GrmError::Internal(_) => "internal",
            GrmError::Cache(_) => "cache",
            GrmError::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for GrmError {
    fn from(e: std::io::Error) -> Self {
        GrmError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, GrmError>;
