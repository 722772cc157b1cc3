use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("rate {rate} is below the minimum {min} of the monotone branch")]
    RateBelowThreshold { rate: f64, min: f64 },

    #[error("channel of user {user} is identically zero")]
    ZeroChannel { user: usize },

    #[error("ratio denominator of user {user} is not positive ({value})")]
    NonPositiveDenominator { user: usize, value: f64 },

    #[error("configuration error at `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
