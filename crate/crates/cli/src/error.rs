use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::record::RecordError;

pub const EXIT_OK: u8 = 0;
/// A claim failed verification or a cross-check found a difference.
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
/// An emitted record failed its own re-check.
pub const EXIT_INVARIANT: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Open { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Record(#[from] RecordError),
    #[error(transparent)]
    Search(#[from] lehmer_core::Error),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_)
            | CliError::Open { .. }
            | CliError::Record(_)
            | CliError::Search(_) => EXIT_USAGE,
            CliError::Invariant(_) => EXIT_INVARIANT,
            CliError::Pool(_) | CliError::Io(_) => EXIT_FAILED,
        }
    }
}
