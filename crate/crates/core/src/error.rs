use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("offset {offset}: {message}")]
    Brackets { offset: usize, message: String },

    #[error("sentence {sentence}: {message}")]
    Structure { sentence: String, message: String },

    #[error("sentence {sentence}: expected {expected} items, found {found}")]
    LengthMismatch {
        sentence: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown scheme '{0}'")]
    UnknownScheme(String),

    #[error("invalid label '{label}': {message}")]
    InvalidLabel { label: String, message: String },

    #[error("expected a dependency tree, got a graph")]
    NotATree,

    #[error("shape mismatch: {left:?} vs {right:?}")]
    Shape {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
