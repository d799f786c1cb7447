//! Crate-wide error type.
//!
//! Every fallible operation in the crate reports through [`Error`]. Failures
//! carry enough context to name the offending quantity (the vanishing factor,
//! the pole location, the violated genericity condition) so that callers can
//! surface an actionable message without re-deriving it.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// A single failed genericity condition together with the offending value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Which condition failed, e.g. `"E1: c is an integer power of q"`.
    pub condition: String,
    /// The offending value, rendered exactly.
    pub value: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (value {})", self.condition, self.value)
    }
}

fn join_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("division by zero in {0}")]
    DivisionByZero(String),

    #[error("vanishing factor {factor} in {context}")]
    VanishingFactor { factor: String, context: String },

    #[error("evaluation at pole x = {0}")]
    PoleAt(String),

    #[error("genericity check failed: {}", join_violations(.0))]
    Genericity(Vec<Violation>),

    #[error("no upper parameter of the form q^-N (N >= 0) terminates the series")]
    NoTerminatingParameter,

    #[error("series argument magnitude {0} >= 1; the sum does not converge")]
    NonConvergent(String),

    #[error("lower parameter {factor} produces a vanishing factor at term {term}")]
    LowerParameterPole { factor: String, term: usize },

    #[error("certified bound {target} not reached within {max_n} terms")]
    BoundNotAchieved { target: String, max_n: usize },

    #[error("degenerate elimination: the second shift has Q identically zero")]
    DegenerateElimination,

    #[error("contiguity step {step} undefined: {reason}")]
    ContiguityStep { step: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
