use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("objective returned non-finite value {value} for particle {particle} at position {position:?}")]
    NonFinite {
        particle: usize,
        position: Vec<f64>,
        value: f64,
    },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("fixture line {line}: {message}")]
    Fixture { line: usize, message: String },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
