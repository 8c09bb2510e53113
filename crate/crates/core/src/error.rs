use thiserror::Error;

/// Error type shared by all toolkit operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid or incomplete input: bad field values, missing required
    /// parameters, malformed files.
    #[error("invalid input: {0}")]
    Input(String),

    /// The requested evaluation leaves the validity regime of the model
    /// (e.g. pair-breaking drive frequencies, normal-state temperatures).
    #[error("out of model regime: {0}")]
    Regime(String),

    /// A fit or iterative numerical procedure failed to produce a usable
    /// result.
    #[error("fit failed: {0}")]
    Fit(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn regime(msg: impl Into<String>) -> Self {
        Error::Regime(msg.into())
    }

    pub fn fit(msg: impl Into<String>) -> Self {
        Error::Fit(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
