use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polytope is unbounded{}", direction_suffix(.0))]
    Unbounded(Option<String>),
    #[error("polytope is empty")]
    Empty,
    #[error("invalid norm: {0}")]
    InvalidNorm(String),
    #[error("scale guard exceeded: {0}")]
    ScaleGuard(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point lies inside the polytope; gradient undefined")]
    PointInside,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("membership violation: {0}")]
    Membership(String),
    #[error("construction self-check failed: {0}")]
    SelfCheck(String),
    #[error("theorem check failed: {0}")]
    TheoremViolation(String),
    #[error("json error: {0}")]
    Json(String),
}

fn direction_suffix(direction: &Option<String>) -> String {
    match direction {
        Some(d) => format!(" in direction {d}"),
        None => String::new(),
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
