//! Command-line front end for `stablereg`.
//!
//! Exit codes: 0 success, 1 verification failed, 2 parse error,
//! 3 invalid epsilon, 4 invalid measure, 5 iteration cap exceeded,
//! 6 shape mismatch, 7 part too large for exhaustive checking.

pub mod commands;
pub mod io;
pub mod report;

pub use commands::{run, Cli};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid measure: {0}")]
    Measure(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Lib(#[from] stablereg::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use stablereg::Error as E;
        match self {
            CliError::Parse(_) => 2,
            CliError::Measure(_) => 4,
            CliError::Shape(_) => 6,
            CliError::Lib(e) => match e {
                E::InvalidEpsilon(_) => 3,
                E::InvalidMeasure(_) | E::SideMismatch { .. } | E::ZeroMeasurePart => 4,
                E::IterationCapExceeded(_) => 5,
                E::ShapeMismatch(_) | E::IndexOutOfRange { .. } => 6,
                E::PartTooLarge { .. } => 7,
                _ => 2,
            },
        }
    }
}
