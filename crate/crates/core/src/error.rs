//! Error type shared by every solver stage.

use std::fmt;

use thiserror::Error;

use crate::Classification;

/// Which of the three profile equations a failure belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Stage {
    /// Gauge profile `a`.
    Gauge,
    /// Neutral condensate `g`.
    Condensate,
    /// Higgs modulus `f`.
    Higgs,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Gauge => "a",
            Stage::Condensate => "g",
            Stage::Higgs => "f",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Error)]
pub enum VortexError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("radius {r} outside profile domain [0, {r_max}]")]
    OutOfDomain { r: f64, r_max: f64 },

    #[error("non-finite state at r = {r}")]
    NonFinite { r: f64 },

    #[error("stage {stage}: bracket [{lo}, {hi}] classifies {lo_class:?}/{hi_class:?}")]
    BracketFailure {
        stage: Stage,
        lo: f64,
        hi: f64,
        lo_class: Classification,
        hi_class: Classification,
    },

    #[error("stage {stage}: trajectory diverged at r = {radius} for parameter {parameter}")]
    Diverged {
        stage: Stage,
        parameter: f64,
        radius: f64,
    },

    #[error("bisection exhausted {iterations} iterations with width {width}")]
    BisectionExhausted { iterations: usize, width: f64 },

    #[error("stage {stage}: {reason}")]
    Unresolved { stage: Stage, reason: String },

    #[error("stage {stage}: output left the admissible set: {reason}")]
    Admissibility { stage: Stage, reason: String },

    #[error("Newton iteration stalled after {iterations} steps, residual {residual:e}")]
    NewtonFailed { iterations: usize, residual: f64 },

    #[error("outer iteration did not converge at (alpha, beta) = ({alpha}, {beta}); last distance {distance:e}")]
    NotConverged {
        alpha: f64,
        beta: f64,
        distance: f64,
    },

    #[error("alpha bracket [{lo}, {hi}] does not straddle the threshold: both ends {}", if *.condensed { "condensed" } else { "abelian" })]
    BoundaryBracket { lo: f64, hi: f64, condensed: bool },
}

impl VortexError {
    /// Attach a stage to errors raised by stage-agnostic helpers.
    pub(crate) fn in_stage(self, stage: Stage) -> Self {
        match self {
            VortexError::BracketFailure {
                lo,
                hi,
                lo_class,
                hi_class,
                ..
            } => VortexError::BracketFailure {
                stage,
                lo,
                hi,
                lo_class,
                hi_class,
            },
            VortexError::Diverged {
                parameter, radius, ..
            } => VortexError::Diverged {
                stage,
                parameter,
                radius,
            },
            VortexError::Unresolved { reason, .. } => VortexError::Unresolved { stage, reason },
            other => other,
        }
    }

    /// Stage of the failure, when the error carries one.
    pub fn stage(&self) -> Option<Stage> {
        match self {
            VortexError::BracketFailure { stage, .. }
            | VortexError::Diverged { stage, .. }
            | VortexError::Unresolved { stage, .. }
            | VortexError::Admissibility { stage, .. } => Some(*stage),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, VortexError>;

pub(crate) fn check_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(VortexError::InvalidArgument(format!(
            "{name} must be finite, got {value}"
        )))
    }
}
