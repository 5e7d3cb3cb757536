//! Relaxed fixed-point iteration `f ← (1 - ω) f + ω T(f)` where `T` solves
//! the gauge and condensate equations for frozen `f` and then the Higgs
//! equation for the resulting `a`, `g`.

use std::sync::Arc;

use crate::analysis::attach_diagnostics;
use crate::error::{Result, Stage, VortexError};
use crate::grid::RadialGrid;
use crate::outcome::{CondensateBranch, VortexSolution};
use crate::params::ModelParams;
use crate::profile::{Profile, ProfileKind};
use crate::shoot::{shoot_a, shoot_f, shoot_g, ShootConfig, ShotResult};

/// Starting profile for the Higgs modulus.
#[derive(Debug, Clone)]
pub enum InitialGuess {
    /// `tanh r`
    Tanh,
    /// `r / √(1 + r²)`
    RationalRise,
    Custom(Profile),
}

impl InitialGuess {
    pub fn profile(&self, grid: &Arc<RadialGrid>) -> Result<Profile> {
        match self {
            InitialGuess::Tanh => Profile::from_fn(grid.clone(), ProfileKind::HiggsF, f64::tanh),
            InitialGuess::RationalRise => {
                Profile::from_fn(grid.clone(), ProfileKind::HiggsF, |r| {
                    r / (1.0 + r * r).sqrt()
                })
            }
            InitialGuess::Custom(p) => {
                if p.grid().nodes() != grid.nodes() {
                    return Err(VortexError::InvalidArgument(
                        "custom initial guess lives on a different grid".into(),
                    ));
                }
                check_admissible(p).map_err(|e| {
                    VortexError::InvalidArgument(format!("custom initial guess: {e}"))
                })?;
                Ok(Profile::new(
                    grid.clone(),
                    p.values().to_vec(),
                    ProfileKind::HiggsF,
                )?)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct OuterConfig {
    /// Stop once `‖f_{k+1} - f_k‖_∞` drops below this.
    pub sup_tol: f64,
    pub max_outer: usize,
    /// Relaxation weight `ω ∈ (0, 1]`.
    pub relaxation: f64,
    pub initial_guess: InitialGuess,
}

impl Default for OuterConfig {
    fn default() -> Self {
        Self {
            sup_tol: 1e-8,
            max_outer: 100,
            relaxation: 0.7,
            initial_guess: InitialGuess::Tanh,
        }
    }
}

impl OuterConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sup_tol > 0.0 && self.sup_tol.is_finite()) {
            return Err(VortexError::InvalidArgument(format!(
                "sup_tol must be positive, got {}",
                self.sup_tol
            )));
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(VortexError::InvalidArgument(format!(
                "relaxation {} outside (0, 1]",
                self.relaxation
            )));
        }
        if self.max_outer == 0 {
            return Err(VortexError::InvalidArgument(
                "max_outer must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Result of one application of `T`.
#[derive(Debug, Clone)]
pub struct TStep {
    pub a: ShotResult,
    pub g: ShotResult,
    pub branch: CondensateBranch,
    /// `T(f)`.
    pub f: ShotResult,
}

/// Brackets reused from a previous application of `T`.
#[derive(Debug, Clone, Copy, Default)]
pub struct WarmStart {
    pub b: Option<f64>,
    pub lambda: Option<f64>,
    pub d: Option<f64>,
}

impl WarmStart {
    fn from_step(step: &TStep) -> Self {
        let positive = |x: f64| (x > 0.0).then_some(x);
        Self {
            b: positive(step.a.parameter),
            lambda: positive(step.g.parameter),
            d: positive(step.f.parameter),
        }
    }
}

fn around(x: Option<f64>, cap: f64) -> Option<(f64, f64)> {
    x.map(|x| (0.95 * x, (1.05 * x).min(cap)))
        .filter(|(lo, hi)| lo < hi)
}

/// Admissible Higgs profile up to rounding: `f(0) = 0`, `0 < f ≤ 1` on the
/// interior and non-decreasing node to node.
pub fn check_admissible(f: &Profile) -> std::result::Result<(), String> {
    let v = f.values();
    if v[0] != 0.0 {
        return Err(format!("f(0) = {} instead of 0", v[0]));
    }
    if let Some(bad) = v[1..].iter().find(|&&x| !(x > 0.0 && x <= 1.0)) {
        return Err(format!("value {bad} outside (0, 1]"));
    }
    if let Some(w) = v.windows(2).find(|w| !(w[1] >= w[0])) {
        return Err(format!("f is not increasing: {} then {}", w[0], w[1]));
    }
    Ok(())
}

/// `T(f)`: gauge and condensate shots for frozen `f` (run concurrently),
/// then the Higgs shot for the resulting `a` and `g`.
pub fn apply_t(
    f: &Profile,
    params: &ModelParams,
    shoot_cfg: &ShootConfig,
    warm: WarmStart,
) -> Result<TStep> {
    let cfg_a = shoot_cfg.with_bracket(around(warm.b, f64::INFINITY));
    let cfg_g = shoot_cfg.with_bracket(around(warm.lambda, (1.0 - 1e-9) * params.g_cap()));
    let (a, g) = rayon::join(
        || shoot_a(f, params.beta(), &cfg_a),
        || shoot_g(f, params, &cfg_g),
    );
    let a = a?;
    let (g, branch) = g?;
    let cfg_f = shoot_cfg.with_bracket(around(warm.d, f64::INFINITY));
    let f_new = shoot_f(&a.profile, &g.profile, &cfg_f)?;
    check_admissible(&f_new.profile).map_err(|reason| VortexError::Admissibility {
        stage: Stage::Higgs,
        reason,
    })?;
    Ok(TStep {
        a,
        g,
        branch,
        f: f_new,
    })
}

/// Solve the coupled system by the relaxed outer iteration.
///
/// A run that hits `max_outer` is returned with `converged = false`.
pub fn solve_vortex(
    params: &ModelParams,
    grid: &Arc<RadialGrid>,
    shoot_cfg: &ShootConfig,
    outer_cfg: &OuterConfig,
) -> Result<VortexSolution> {
    shoot_cfg.validate()?;
    outer_cfg.validate()?;
    let omega = outer_cfg.relaxation;
    let mut f = outer_cfg.initial_guess.profile(grid)?;
    check_admissible(&f).map_err(|reason| VortexError::Admissibility {
        stage: Stage::Higgs,
        reason,
    })?;
    let mut warm = WarmStart::default();
    let mut history = Vec::new();
    let mut last: Option<TStep> = None;
    let mut converged = false;

    for _ in 0..outer_cfg.max_outer {
        let step = apply_t(&f, params, shoot_cfg, warm)?;
        warm = WarmStart::from_step(&step);
        let next: Vec<f64> = f
            .values()
            .iter()
            .zip(step.f.profile.values())
            .map(|(&old, &new)| (1.0 - omega) * old + omega * new)
            .collect();
        let next = f.with_values(next)?;
        let dist = next.sup_distance(&f);
        history.push(dist);
        f = next;
        last = Some(step);
        if dist < outer_cfg.sup_tol {
            converged = true;
            break;
        }
    }

    let step = last.expect("max_outer is positive");
    let mut sol = VortexSolution {
        params: *params,
        a: step.a.profile,
        g: step.g.profile,
        f: step.f.profile,
        shot_b: step.a.parameter,
        shot_lambda: step.g.parameter,
        shot_d: step.f.parameter,
        branch: step.branch,
        outer_iterations: history.len(),
        converged,
        residuals: [0.0; 3],
        decay_fits: [None; 3],
        distance_history: history,
    };
    attach_diagnostics(&mut sol);
    Ok(sol)
}
