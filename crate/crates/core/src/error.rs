//! Error types shared across the crate.

use thiserror::Error;

use crate::field::ScalarField;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch {
        expected: ScalarField,
        found: ScalarField,
    },

    #[error("dimension mismatch: {context} (expected {expected}, found {found})")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("degree {degree} lies outside the validity window {window}")]
    WindowExceeded { degree: usize, window: usize },

    #[error("size budget exceeded at level {level}: {size} basis elements, budget {budget}")]
    BudgetExceeded {
        level: usize,
        size: usize,
        budget: usize,
    },

    #[error("{law} fails: {witness}")]
    AxiomViolation { law: String, witness: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} is not prime")]
    NotPrime(u64),
}

impl Error {
    pub fn axiom(law: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::AxiomViolation {
            law: law.into(),
            witness: witness.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
