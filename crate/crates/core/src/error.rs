use thiserror::Error;

use crate::weight::Weight;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid root datum: {axiom}: {detail}")]
    InvalidDatum { axiom: String, detail: String },

    #[error("weight {0} is not dominant")]
    NotDominant(Weight),

    #[error("weight {weight} has length {found}, expected rank {expected}")]
    RankMismatch {
        weight: Weight,
        expected: usize,
        found: usize,
    },

    #[error("Weyl group closure exceeded the bound of {0} elements")]
    WeylBoundExceeded(usize),

    #[error("{origin}:{line}:{column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("oracle rejected ({axiom}): {witness}")]
    InvalidOracle { axiom: String, witness: String },

    #[error("{0} is not in the monoid generated by the fundamental classes")]
    OutsideMonoid(Weight),

    #[error("datum is not semisimple: {0}")]
    NotSemisimple(String),

    #[error("reconstruction failed at stage {stage}: {reason}")]
    Reconstruction { stage: String, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn datum(axiom: &str, detail: impl Into<String>) -> Self {
        Error::InvalidDatum {
            axiom: axiom.to_string(),
            detail: detail.into(),
        }
    }

    pub(crate) fn oracle(axiom: &str, witness: impl Into<String>) -> Self {
        Error::InvalidOracle {
            axiom: axiom.to_string(),
            witness: witness.into(),
        }
    }

    pub(crate) fn stage(stage: &str, reason: impl Into<String>) -> Self {
        Error::Reconstruction {
            stage: stage.to_string(),
            reason: reason.into(),
        }
    }
}
