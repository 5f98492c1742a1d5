use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be a probability in [0, 1], got {value}")]
    NotAProbability { name: &'static str, value: f64 },

    #[error("{what} is undefined at {name} = {value}")]
    Singular {
        what: &'static str,
        name: &'static str,
        value: f64,
    },

    #[error("{name} must be at least {min}, got {value}")]
    TooSmall {
        name: &'static str,
        min: u64,
        value: u64,
    },

    #[error("{name} must be finite and positive, got {value}")]
    NotPositive { name: &'static str, value: f64 },

    #[error("table row has {got} cells, expected {expected}")]
    RaggedRow { expected: usize, got: usize },

    #[error("output error: {0}")]
    Output(String),
}
