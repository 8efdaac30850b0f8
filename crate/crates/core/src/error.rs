use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid layout: {0}")]
    Layout(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("unknown problem '{name}'; available: {available}")]
    UnknownProblem { name: String, available: String },

    #[error("class explosion at {cut}: more than {cap} representatives")]
    ClassExplosion { cut: String, cap: usize },

    #[error("instance too large for exhaustive search: n={n} > {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("certificate check failed: {0}")]
    Certificate(String),
}

impl Error {
    /// True for aborts caused by a resource cap rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ClassExplosion { .. } | Error::TooLarge { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
