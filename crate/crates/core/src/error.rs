use std::fmt;

use thiserror::Error;

/// Describes the equation that has no root in the working field, and when
/// possible the smallest cyclotomic field known to contain a root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtensionHint {
    pub equation: String,
    pub cyclotomic_order: Option<u32>,
}

impl ExtensionHint {
    pub fn new(equation: impl Into<String>, cyclotomic_order: Option<u32>) -> Self {
        Self {
            equation: equation.into(),
            cyclotomic_order,
        }
    }
}

impl fmt::Display for ExtensionHint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.equation)?;
        if let Some(m) = self.cyclotomic_order {
            write!(f, " (solvable over Q(zeta {m}))")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("field extension required: {0}")]
    FieldExtensionRequired(ExtensionHint),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("degree {inner} does not divide degree {target}")]
    DegreeNotDivisible { inner: usize, target: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("bad reduction at p = {p}: {reason}")]
    BadReduction { p: u64, reason: String },

    #[error("curve image collapsed: {0}")]
    Collapsed(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn cap_error(what: &str, degree: usize, cap: usize) -> Error {
    Error::ResourceCap(format!("{what}: degree {degree} exceeds cap {cap}"))
}
