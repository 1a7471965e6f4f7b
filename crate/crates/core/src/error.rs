use thiserror::Error;

/// Errors surfaced by fallible operations.
///
/// Contract violations (calling an operation outside its preconditions, e.g.
/// mixing value spaces or passing a timestep outside the schedule) panic
/// instead; they are programming errors, not runtime conditions.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or configuration value is outside its allowed range.
    #[error("configuration error: {0}")]
    Config(String),

    /// A file being read does not match its declared format.
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    /// A required input artifact (checkpoint, dataset) is absent.
    #[error("missing artifact: {0}")]
    MissingArtifact(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
