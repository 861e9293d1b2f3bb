use thiserror::Error;

/// Everything that makes the CLI exit with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: duplicate name `{name}`")]
    Duplicate { name: String, line: usize },
    #[error("line {line}: unresolved reference `{name}` in `{block}`")]
    Unresolved { name: String, block: String, line: usize },
    #[error("line {line}: malformed {kind} `{block}`: {message}")]
    Malformed {
        kind: String,
        block: String,
        line: usize,
        message: String,
    },
    #[error("refusing `{what}`: size {size} is above --max-size {cap}")]
    Refused { what: String, size: usize, cap: usize },
    #[error("{0}")]
    Usage(String),
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] modaldoc::Error),
}
