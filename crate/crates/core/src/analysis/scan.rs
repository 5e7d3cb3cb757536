//! Central condensate over a grid of couplings, and the location of the
//! Abelian / condensed transition.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, VortexError};
use crate::fixedpoint::{solve_vortex, OuterConfig};
use crate::grid::RadialGrid;
use crate::params::ModelParams;
use crate::shoot::ShootConfig;

/// Default indicator threshold on `g(0)`.
pub const DEFAULT_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum PointStatus {
    Converged,
    /// `α ≥ √½`: `g ≡ 0` without solving.
    ShortCircuited,
    /// The outer iteration hit its cap; `g(0)` is from the last iterate.
    NotConverged,
    Failed(String),
}

impl PointStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, PointStatus::Converged | PointStatus::ShortCircuited)
    }

    pub fn label(&self) -> &'static str {
        match self {
            PointStatus::Converged => "converged",
            PointStatus::ShortCircuited => "short_circuited",
            PointStatus::NotConverged => "not_converged",
            PointStatus::Failed(_) => "failed",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseDiagram {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// `g0_values[i][j]` at `(alphas[i], betas[j])`; `NaN` for failed points.
    pub g0_values: Vec<Vec<f64>>,
    pub status: Vec<Vec<PointStatus>>,
    pub threshold: f64,
    /// `(β, α*)` for every column with a transition in the scanned range.
    pub boundary_estimates: Vec<(f64, f64)>,
}

impl PhaseDiagram {
    pub fn all_ok(&self) -> bool {
        self.status.iter().flatten().all(PointStatus::is_ok)
    }

    /// Columns where `g(0)` increases somewhere along increasing `α`.
    pub fn non_monotone_betas(&self) -> Vec<f64> {
        (0..self.betas.len())
            .filter(|&j| {
                let col: Vec<f64> = self
                    .g0_values
                    .iter()
                    .map(|row| row[j])
                    .filter(|v| v.is_finite())
                    .collect();
                col.windows(2).any(|w| w[1] > w[0])
            })
            .map(|j| self.betas[j])
            .collect()
    }

    /// Columns where a condensed point lies above an Abelian one in `α`.
    pub fn inconsistent_betas(&self) -> Vec<f64> {
        (0..self.betas.len())
            .filter(|&j| {
                let mut seen_abelian = false;
                for row in &self.g0_values {
                    let v = row[j];
                    if !v.is_finite() {
                        continue;
                    }
                    if v > self.threshold && seen_abelian {
                        return true;
                    }
                    seen_abelian |= v <= self.threshold;
                }
                false
            })
            .map(|j| self.betas[j])
            .collect()
    }
}

/// Central condensate at one point: `0` without solving in the Abelian
/// regime.
pub fn g0_at(
    params: &ModelParams,
    grid: &Arc<RadialGrid>,
    shoot_cfg: &ShootConfig,
    outer_cfg: &OuterConfig,
) -> (f64, PointStatus) {
    if params.is_abelian() {
        return (0.0, PointStatus::ShortCircuited);
    }
    match solve_vortex(params, grid, shoot_cfg, outer_cfg) {
        Ok(sol) if sol.converged => (sol.g0(), PointStatus::Converged),
        Ok(sol) => (sol.g0(), PointStatus::NotConverged),
        Err(e) => (f64::NAN, PointStatus::Failed(e.to_string())),
    }
}

fn check_axis(name: &str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(VortexError::InvalidArgument(format!("empty {name} list")));
    }
    if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(VortexError::InvalidArgument(format!(
            "{name} value {v} is not positive"
        )));
    }
    Ok(())
}

/// Solve at every `(α, β)` pair concurrently. Failures are recorded per
/// point.
pub fn scan_phase(
    alphas: &[f64],
    betas: &[f64],
    grid: &Arc<RadialGrid>,
    shoot_cfg: &ShootConfig,
    outer_cfg: &OuterConfig,
    threshold: f64,
) -> Result<PhaseDiagram> {
    check_axis("alpha", alphas)?;
    check_axis("beta", betas)?;
    shoot_cfg.validate()?;
    outer_cfg.validate()?;
    let mut alphas = alphas.to_vec();
    alphas.sort_by(f64::total_cmp);
    let nb = betas.len();
    let points: Vec<(f64, PointStatus)> = (0..alphas.len() * nb)
        .into_par_iter()
        .map(|idx| {
            let params =
                ModelParams::new(alphas[idx / nb], betas[idx % nb]).expect("validated axes");
            g0_at(&params, grid, shoot_cfg, outer_cfg)
        })
        .collect();

    let mut g0_values = vec![vec![0.0; nb]; alphas.len()];
    let mut status = vec![vec![PointStatus::Converged; nb]; alphas.len()];
    for (idx, (g0, st)) in points.into_iter().enumerate() {
        g0_values[idx / nb][idx % nb] = g0;
        status[idx / nb][idx % nb] = st;
    }
    let boundary_estimates = betas
        .iter()
        .enumerate()
        .filter_map(|(j, &beta)| {
            let col: Vec<(f64, f64)> = alphas
                .iter()
                .zip(&g0_values)
                .map(|(&a, row)| (a, row[j]))
                .filter(|(_, v)| v.is_finite())
                .collect();
            col.windows(2)
                .rev()
                .find(|w| w[0].1 > threshold && w[1].1 <= threshold)
                .map(|w| (beta, 0.5 * (w[0].0 + w[1].0)))
        })
        .collect();
    Ok(PhaseDiagram {
        alphas,
        betas: betas.to_vec(),
        g0_values,
        status,
        threshold,
        boundary_estimates,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundarySearch {
    pub beta: f64,
    pub alpha_star: f64,
    /// Final `(condensed, abelian)` bracket.
    pub bracket: (f64, f64),
    /// Every `(α, g(0))` evaluated.
    pub evaluations: Vec<(f64, f64)>,
}

/// Bisection in `α` on the indicator `g(0) > threshold` down to a bracket
/// of width `alpha_tol`.
#[allow(clippy::too_many_arguments)]
pub fn find_boundary(
    beta: f64,
    alpha_bracket: (f64, f64),
    threshold: f64,
    alpha_tol: f64,
    grid: &Arc<RadialGrid>,
    shoot_cfg: &ShootConfig,
    outer_cfg: &OuterConfig,
) -> Result<BoundarySearch> {
    let (lo, hi) = alpha_bracket;
    if !(lo > 0.0 && lo < hi) || !(threshold > 0.0) || !(alpha_tol > 0.0) {
        return Err(VortexError::InvalidArgument(format!(
            "bad boundary search: bracket [{lo}, {hi}], threshold {threshold}, tol {alpha_tol}"
        )));
    }
    let mut evaluations = Vec::new();
    let mut condensed = |alpha: f64| -> Result<bool> {
        let params = ModelParams::new(alpha, beta)?;
        let (g0, status) = g0_at(&params, grid, shoot_cfg, outer_cfg);
        evaluations.push((alpha, g0));
        match status {
            PointStatus::Converged | PointStatus::ShortCircuited => Ok(g0 > threshold),
            PointStatus::NotConverged => Err(VortexError::NotConverged {
                alpha,
                beta,
                distance: f64::NAN,
            }),
            PointStatus::Failed(reason) => Err(VortexError::InvalidArgument(format!(
                "solve at alpha = {alpha} failed: {reason}"
            ))),
        }
    };
    let lo_c = condensed(lo)?;
    let hi_c = condensed(hi)?;
    if lo_c == hi_c {
        return Err(VortexError::BoundaryBracket {
            lo,
            hi,
            condensed: lo_c,
        });
    }
    // keep `c` on the condensed side and `n` on the Abelian side
    let (mut c, mut n) = if lo_c { (lo, hi) } else { (hi, lo) };
    while (n - c).abs() > alpha_tol {
        let mid = 0.5 * (c + n);
        if condensed(mid)? {
            c = mid;
        } else {
            n = mid;
        }
    }
    Ok(BoundarySearch {
        beta,
        alpha_star: 0.5 * (c + n),
        bracket: (c, n),
        evaluations,
    })
}
