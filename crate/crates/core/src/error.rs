use serde::Serialize;
use thiserror::Error;

/// A single failed law instance together with the data that exhibits it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: String,
    pub witness: String,
}

impl Violation {
    pub fn new(law: impl Into<String>, witness: impl Into<String>) -> Self {
        Violation {
            law: law.into(),
            witness: witness.into(),
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.law, self.witness)
    }
}

/// Empty means every law held.
pub type Violations = Vec<Violation>;

fn summarize(violations: &[Violation]) -> String {
    let mut out = String::new();
    for (i, v) in violations.iter().take(3).enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        out.push_str(&v.to_string());
    }
    if violations.len() > 3 {
        out.push_str(&format!("; ... ({} total)", violations.len()));
    }
    out
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("unknown identifier `{0}`")]
    Unknown(String),
    #[error("incomplete data: {0}")]
    Partial(String),
    #[error("boundary mismatch: {0}")]
    Boundary(String),
    #[error("{context} violates its laws: {}", summarize(.violations))]
    Laws {
        context: String,
        violations: Violations,
    },
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("{what} needs {needed} candidates, above the cap of {cap}")]
    TooLarge { what: String, needed: u128, cap: u128 },
    #[error("closure requirement unmet: {0}")]
    Closure(String),
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn laws(context: impl Into<String>, violations: Violations) -> Self {
        Error::Laws {
            context: context.into(),
            violations,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Turns a violation list into an error when it is non-empty.
pub fn require(context: &str, violations: Violations) -> Result<()> {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::laws(context, violations))
    }
}
