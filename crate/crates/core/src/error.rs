use thiserror::Error;

use crate::complex::Simplex;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse grouping of errors, used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input data: malformed simplices, parse failures, degenerate geometry.
    Input,
    /// The input is well formed but does not satisfy an operation's structural requirements.
    Precondition,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed simplex {0:?}: {1}")]
    MalformedSimplex(Vec<u32>, &'static str),

    #[error("simplex {0} is not in the complex")]
    MissingSimplex(Simplex),

    #[error("vertex {0} has no coordinates")]
    UnknownVertex(u32),

    #[error("structure error: {0}")]
    Structure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("direction is not general: edge {0} has tied endpoint heights")]
    DegenerateDirection(Simplex),

    #[error("direction is not allowable: {0}")]
    NotAllowable(String),

    #[error("simplex {0} is geometrically degenerate")]
    DegenerateSimplex(Simplex),

    #[error("exact angle computation supports simplex dimension <= 3, got {0}")]
    DimensionCap(usize),

    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),

    #[error("direction sampler exhausted after {0} consecutive rejections")]
    SamplerExhausted(usize),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("vertex {0} is isolated; its scalar curvature is undefined")]
    IsolatedVertex(u32),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::MalformedSimplex(..)
            | Error::MissingSimplex(_)
            | Error::UnknownVertex(_)
            | Error::DegenerateSimplex(_)
            | Error::InvalidEmbedding(_)
            | Error::InvalidFiltration(_)
            | Error::Parse { .. }
            | Error::Io(_) => ErrorClass::Input,
            Error::Structure(_)
            | Error::Precondition(_)
            | Error::DegenerateDirection(_)
            | Error::NotAllowable(_)
            | Error::DimensionCap(_)
            | Error::SamplerExhausted(_)
            | Error::IsolatedVertex(_) => ErrorClass::Precondition,
        }
    }

    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
