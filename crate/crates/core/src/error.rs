use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpucError {
    #[error("coefficient {index} has modulus {modulus} (must lie strictly inside the unit disk)")]
    OutsideDisk { index: usize, modulus: f64 },

    #[error("moment of order {order} exceeds the aliasing guard |k| <= {limit}")]
    Aliasing { order: i64, limit: usize },

    #[error("moment matrix is numerically singular at degree {degree} (condition estimate {condition:e})")]
    IllConditioned { degree: usize, condition: f64 },

    #[error("grid of {grid} points cannot resolve level {level}: at least {required} points needed")]
    Resolution {
        grid: usize,
        level: usize,
        required: usize,
    },

    #[error("interval length {delta} is below the admissible minimum {minimum} for level {level}")]
    IntervalTooShort {
        delta: f64,
        minimum: f64,
        level: usize,
    },

    #[error("radius factor became nonpositive at step {step}")]
    NonpositiveRadius { step: usize },

    #[error("measure has infinite energy")]
    InfiniteEnergy,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl OpucError {
    /// True for failures of a numerical guard (resolution, aliasing,
    /// conditioning, internal invariants) as opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            OpucError::Aliasing { .. }
                | OpucError::IllConditioned { .. }
                | OpucError::Resolution { .. }
                | OpucError::NonpositiveRadius { .. }
                | OpucError::InfiniteEnergy
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        OpucError::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, OpucError>;
