//! Model files, command dispatch and reports for the `modaldoc` binary.

pub mod commands;
pub mod document;
pub mod error;
pub mod model;
pub mod report;

pub use document::{Atom, Block, Document, Entry};
pub use error::CliError;
pub use model::{Model, Object};
pub use report::{Report, Verdict};
