use thiserror::Error;

/// Errors raised by term construction, evaluation and the Goodstein machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("argument out of range: {0}")]
    ArgumentOutOfRange(String),
    #[error("not an additive principal term: {0}")]
    NotPrincipal(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("non-canonical term: {0}")]
    NonCanonical(String),
    #[error("index {zeta} outside the domain of {term}[.]")]
    IndexOutOfDomain { term: String, zeta: String },
    #[error("bad base {0}: bases must be at least 2")]
    BadBase(u64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("promotion failure at {0}")]
    PromotionFailure(String),
    #[error("numeric and ordinal Goodstein paths disagree at step {step}: numeric {numeric}, ordinal {ordinal}")]
    PathMismatch {
        step: u64,
        numeric: String,
        ordinal: String,
    },
}

impl OrdinalError {
    pub fn is_budget(&self) -> bool {
        matches!(self, OrdinalError::BudgetExhausted(_))
    }
}

pub type Result<T> = std::result::Result<T, OrdinalError>;

pub(crate) fn check_base(k: u64) -> Result<()> {
    if k < 2 {
        Err(OrdinalError::BadBase(k))
    } else {
        Ok(())
    }
}
