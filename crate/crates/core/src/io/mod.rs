//! Benchmark file formats: instances, solutions and best-known values.

mod bks;
mod instance;
mod solution;

use std::path::PathBuf;

pub use bks::{BksEntry, BksTable};
pub use instance::{expected_type_code, parse_instance, parse_instance_str, ParseOptions};
pub use solution::{format_solution, parse_solution, read_solution, write_solution};

use crate::model::ModelError;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line 1: type code {found} does not match {variant} (expected {expected})")]
    TypeCode {
        found: i64,
        variant: crate::model::Variant,
        expected: i64,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("best-known table: {0}")]
    Bks(String),
}

impl IoError {
    pub(crate) fn file(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        IoError::File {
            path: path.into(),
            source,
        }
    }

    /// Whether the error comes from malformed content rather than the
    /// file system.
    pub fn is_parse(&self) -> bool {
        !matches!(self, IoError::File { .. })
    }
}
