//! Command-line front end for `arrcoh`: input documents, jobs and reports.

pub mod input;
pub mod job;
pub mod report;

pub use input::{parse_document, parse_input, serialize, InputDocument};
pub use job::{run, Command, Format, JobSpec, Source};
pub use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input: {0}")]
    Input(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] arrcoh::Error),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}
