//! Results of single shots and of the full coupled solve.

use serde::Serialize;

use crate::integrate::Trajectory;
use crate::params::ModelParams;
use crate::profile::Profile;

/// Discrete version of the undershoot / exact / overshoot parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    /// The profile turns back before reaching its far-field value.
    Under,
    /// The profile crosses its far-field value.
    Over,
    /// Neither event fired and the far-field condition holds.
    Converged,
    /// The trajectory left the escape bound.
    Diverged,
}

/// One integration attempt for a shot parameter (`B`, `lambda` or `D`).
#[derive(Debug, Clone)]
pub struct ShootingOutcome {
    pub parameter: f64,
    pub classification: Classification,
    pub trajectory: Trajectory,
    pub termination_radius: f64,
}

/// How the condensate profile was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CondensateBranch {
    /// `alpha >= alpha_crit`: `g ≡ 0` without integrating.
    Abelian,
    /// `g_cap` is too small to resolve a shot; `g ≡ 0` returned.
    BoundaryDegenerate,
    /// No shot in `(0, g_cap)` crosses zero, so only `g ≡ 0` decays.
    Trivial,
    /// Bisected non-trivial condensate with `g(0) > 0`.
    Condensed,
}

/// Converged `(a, g, f)` profiles with diagnostics.
#[derive(Debug, Clone)]
pub struct VortexSolution {
    pub params: ModelParams,
    pub a: Profile,
    pub g: Profile,
    pub f: Profile,
    pub shot_b: f64,
    pub shot_lambda: f64,
    pub shot_d: f64,
    pub branch: CondensateBranch,
    pub outer_iterations: usize,
    pub converged: bool,
    /// Sup-norm residuals of the `a`, `g` and `f` equations.
    pub residuals: [f64; 3],
    /// Fitted far-field exponents of `a`, `g` and `1 - f`; `None` when the
    /// field vanishes or cannot be fitted.
    pub decay_fits: [Option<f64>; 3],
    /// `‖f_{k+1} - f_k‖_∞` for every outer step.
    pub distance_history: Vec<f64>,
}

impl VortexSolution {
    /// Central condensate `g(0)`.
    pub fn g0(&self) -> f64 {
        self.g.values()[0]
    }
}
