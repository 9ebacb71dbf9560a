use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardyError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown name `{0}`")]
    Lookup(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("malformed function `{name}`: {reason}")]
    Malformed { name: String, reason: String },
    #[error("integrand evaluated to {value} at t = {t}")]
    Evaluation { t: f64, value: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, HardyError>;
