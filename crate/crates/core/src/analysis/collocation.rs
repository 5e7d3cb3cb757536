//! Finite-difference Newton solver for the full boundary value problem.
//!
//! All three fields are discretized together with the stencils of
//! [`super::stencil`]; the Jacobian is block tridiagonal with 3×3 blocks and
//! is factored by block Thomas elimination. `a(r_max) = 0`, `g(r_max) = 0`
//! and `f(r_max) = 1` are imposed as Dirichlet conditions. This module
//! deliberately shares nothing with the shooting pipeline.

use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Result, VortexError};
use crate::grid::RadialGrid;
use crate::outcome::{CondensateBranch, VortexSolution};
use crate::params::ModelParams;
use crate::profile::{Profile, ProfileKind};

use super::attach_diagnostics;
use super::stencil::{even_extrapolation, interior_stencils, node_residual, scaled_higgs, Stencil};

#[derive(Debug, Clone)]
pub struct CollocationConfig {
    /// Stop once the sup-norm residual is below this.
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Step halvings allowed per Newton step.
    pub max_halvings: usize,
    /// Seed amplitude of `g` as a fraction of `√(1 - 2α²)`; zero seeds `g ≡ 0`.
    pub seed_condensate: f64,
}

impl Default for CollocationConfig {
    fn default() -> Self {
        Self {
            newton_tol: 1e-9,
            max_newton: 60,
            max_halvings: 30,
            seed_condensate: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CollocationResult {
    pub solution: VortexSolution,
    pub newton_iterations: usize,
    /// Sup-norm residual of the discrete system at the returned iterate.
    pub newton_residual: f64,
}

type Block = Matrix3<f64>;
type Vec3 = Vector3<f64>;

struct System<'a> {
    params: ModelParams,
    nodes: &'a [f64],
    stencils: Vec<Stencil>,
    even: (f64, f64),
}

impl System<'_> {
    fn blocks(&self) -> usize {
        self.nodes.len() - 2
    }

    /// Full node arrays including the boundary values.
    fn expand(&self, x: &[Vec3]) -> [Vec<f64>; 3] {
        let n = self.nodes.len();
        let mut a = vec![0.0; n];
        let mut g = vec![0.0; n];
        let mut f = vec![0.0; n];
        for (k, v) in x.iter().enumerate() {
            a[k + 1] = v[0];
            g[k + 1] = v[1];
            f[k + 1] = v[2];
        }
        a[0] = 1.0;
        g[0] = self.even.0 * g[1] + self.even.1 * g[2];
        f[0] = 0.0;
        a[n - 1] = 0.0;
        g[n - 1] = 0.0;
        f[n - 1] = 1.0;
        [a, g, f]
    }

    fn residual(&self, x: &[Vec3]) -> Vec<Vec3> {
        let [a, g, f] = self.expand(x);
        let u = scaled_higgs(self.nodes, &f);
        self.stencils
            .iter()
            .enumerate()
            .map(|(k, st)| {
                let i = k + 1;
                let w = |y: &[f64]| [y[i - 1], y[i], y[i + 1]];
                Vec3::from(node_residual(
                    &self.params,
                    self.nodes[i],
                    st,
                    w(&a),
                    w(&g),
                    w(&u),
                ))
            })
            .collect()
    }

    /// Lower, diagonal and upper blocks of the Jacobian.
    fn jacobian(&self, x: &[Vec3]) -> (Vec<Block>, Vec<Block>, Vec<Block>) {
        let (alpha, beta) = (self.params.alpha(), self.params.beta());
        let m = self.blocks();
        let nodes = self.nodes;
        let mut lower = vec![Block::zeros(); m];
        let mut diag = vec![Block::zeros(); m];
        let mut upper = vec![Block::zeros(); m];
        for k in 0..m {
            let i = k + 1;
            let r = nodes[i];
            let st = &self.stencils[k];
            let la: [f64; 3] = std::array::from_fn(|l| st.d2[l] - st.d1[l] / r);
            let lg: [f64; 3] = std::array::from_fn(|l| st.d2[l] + st.d1[l] / r);
            let lu: [f64; 3] = std::array::from_fn(|l| r * st.d2[l] + 3.0 * st.d1[l]);
            let (a, g, f) = (x[k][0], x[k][1], x[k][2]);

            let d = &mut diag[k];
            d[(0, 0)] = la[1] - beta * beta * f * f;
            d[(0, 2)] = -2.0 * beta * beta * f * a;
            d[(1, 1)] = lg[1] - alpha * alpha - 0.5 * (f * f + 3.0 * g * g - 1.0);
            d[(1, 2)] = -f * g;
            d[(2, 0)] = -2.0 * a * f / (r * r);
            d[(2, 1)] = -g * f;
            d[(2, 2)] = lu[1] / r - (a * a - 1.0) / (r * r) - 0.5 * (3.0 * f * f + g * g - 1.0);

            if k > 0 {
                lower[k] = Block::from_diagonal(&Vec3::new(la[0], lg[0], lu[0] / nodes[i - 1]));
            } else {
                // node 0 enters through the even extrapolation of g and u
                let (c1, c2) = self.even;
                d[(1, 1)] += lg[0] * c1;
                d[(2, 2)] += lu[0] * c1 / nodes[1];
                upper[k][(1, 1)] += lg[0] * c2;
                upper[k][(2, 2)] += lu[0] * c2 / nodes[2];
            }
            if k + 1 < m {
                upper[k][(0, 0)] += la[2];
                upper[k][(1, 1)] += lg[2];
                upper[k][(2, 2)] += lu[2] / nodes[i + 1];
            }
        }
        (lower, diag, upper)
    }
}

fn sup_norm(v: &[Vec3]) -> f64 {
    v.iter().map(|b| b.amax()).fold(0.0, f64::max)
}

/// Solve the block tridiagonal system `J δ = rhs`.
fn block_thomas(
    lower: &[Block],
    diag: &[Block],
    upper: &[Block],
    rhs: &[Vec3],
) -> Option<Vec<Vec3>> {
    let m = diag.len();
    let mut c = Vec::with_capacity(m);
    let mut d = Vec::with_capacity(m);
    for k in 0..m {
        let (pivot, rhs_k) = if k == 0 {
            (diag[0], rhs[0])
        } else {
            (diag[k] - lower[k] * c[k - 1], rhs[k] - lower[k] * d[k - 1])
        };
        let inv = pivot.try_inverse()?;
        c.push(inv * upper[k]);
        d.push(inv * rhs_k);
    }
    let mut x = vec![Vec3::zeros(); m];
    x[m - 1] = d[m - 1];
    for k in (0..m - 1).rev() {
        x[k] = d[k] - c[k] * x[k + 1];
    }
    Some(x)
}

/// Newton iteration on the discretized system, seeded from `tanh` and
/// exponential profiles.
pub fn collocation_oracle(
    params: &ModelParams,
    grid: &Arc<RadialGrid>,
    cfg: &CollocationConfig,
) -> Result<CollocationResult> {
    let nodes = grid.nodes();
    if nodes.len() < 4 {
        return Err(VortexError::InvalidArgument(
            "collocation needs at least 4 nodes".into(),
        ));
    }
    let sys = System {
        params: *params,
        nodes,
        stencils: interior_stencils(nodes),
        even: even_extrapolation(nodes),
    };
    let (alpha, beta) = (params.alpha(), params.beta());
    let g_amp = cfg.seed_condensate * params.g_cap();
    let mut x: Vec<Vec3> = nodes[1..nodes.len() - 1]
        .iter()
        .map(|&r| {
            Vec3::new(
                (1.0 + beta * r) * (-beta * r).exp(),
                g_amp / (alpha * r).cosh(),
                r.tanh(),
            )
        })
        .collect();

    // second differences cannot resolve the residual below rounding of `y/h²`
    let h_min = nodes[1] - nodes[0];
    let tol = cfg.newton_tol.max(4.0 * f64::EPSILON / (h_min * h_min));
    let mut res = sys.residual(&x);
    let mut norm = sup_norm(&res);
    let mut iterations = 0;
    while norm > tol {
        if iterations == cfg.max_newton {
            return Err(VortexError::NewtonFailed {
                iterations,
                residual: norm,
            });
        }
        iterations += 1;
        let (lower, diag, upper) = sys.jacobian(&x);
        let rhs: Vec<Vec3> = res.iter().map(|v| -v).collect();
        let step = block_thomas(&lower, &diag, &upper, &rhs).ok_or(VortexError::NewtonFailed {
            iterations,
            residual: norm,
        })?;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=cfg.max_halvings {
            let trial: Vec<Vec3> = x.iter().zip(&step).map(|(xi, si)| xi + si * t).collect();
            let trial_res = sys.residual(&trial);
            let trial_norm = sup_norm(&trial_res);
            if trial_norm < norm {
                x = trial;
                res = trial_res;
                norm = trial_norm;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // no descent left: rounding floor of the discrete operator
            if sup_norm(&step) < 1e-10 {
                break;
            }
            return Err(VortexError::NewtonFailed {
                iterations,
                residual: norm,
            });
        }
    }

    let [a, g, f] = sys.expand(&x);
    let branch = if params.is_abelian() {
        CondensateBranch::Abelian
    } else if g.iter().all(|v| v.abs() < 1e-10) {
        CondensateBranch::Trivial
    } else {
        CondensateBranch::Condensed
    };
    let r1 = nodes[1];
    let mut solution = VortexSolution {
        params: *params,
        shot_b: (1.0 - a[1]) / (r1 * r1),
        shot_lambda: g[0],
        shot_d: f[1] / r1,
        a: Profile::new(grid.clone(), a, ProfileKind::GaugeA)?,
        g: Profile::new(grid.clone(), g, ProfileKind::CondensateG)?,
        f: Profile::new(grid.clone(), f, ProfileKind::HiggsF)?,
        branch,
        outer_iterations: iterations,
        converged: true,
        residuals: [0.0; 3],
        decay_fits: [None; 3],
        distance_history: Vec::new(),
    };
    attach_diagnostics(&mut solution);
    Ok(CollocationResult {
        solution,
        newton_iterations: iterations,
        newton_residual: norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_thomas_matches_dense_solve() {
        let m = 4;
        let mk = |s: f64| Block::from_fn(|i, j| s + (i * 3 + j) as f64 * 0.1);
        let lower: Vec<Block> = (0..m).map(|k| mk(0.1 * k as f64)).collect();
        let diag: Vec<Block> = (0..m)
            .map(|k| mk(0.2) + Block::identity() * (5.0 + k as f64))
            .collect();
        let upper: Vec<Block> = (0..m).map(|k| mk(-0.3 + 0.05 * k as f64)).collect();
        let rhs: Vec<Vec3> = (0..m).map(|k| Vec3::new(1.0, -(k as f64), 0.5)).collect();
        let x = block_thomas(&lower, &diag, &upper, &rhs).unwrap();

        let mut dense = nalgebra::DMatrix::<f64>::zeros(3 * m, 3 * m);
        for k in 0..m {
            dense.view_mut((3 * k, 3 * k), (3, 3)).copy_from(&diag[k]);
            if k > 0 {
                dense
                    .view_mut((3 * k, 3 * k - 3), (3, 3))
                    .copy_from(&lower[k]);
            }
            if k + 1 < m {
                dense
                    .view_mut((3 * k, 3 * k + 3), (3, 3))
                    .copy_from(&upper[k]);
            }
        }
        let b = nalgebra::DVector::from_iterator(3 * m, rhs.iter().flat_map(|v| v.iter().copied()));
        let want = dense.lu().solve(&b).unwrap();
        for k in 0..m {
            for c in 0..3 {
                assert!((x[k][c] - want[3 * k + c]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let grid = RadialGrid::geometric(10.0, 12, 1.2).unwrap();
        let nodes = grid.nodes();
        let sys = System {
            params: ModelParams::new(0.4, 0.8).unwrap(),
            nodes,
            stencils: interior_stencils(nodes),
            even: even_extrapolation(nodes),
        };
        let x: Vec<Vec3> = nodes[1..nodes.len() - 1]
            .iter()
            .map(|&r| Vec3::new((-r).exp(), 0.3 / (1.0 + r), (0.8 * r).tanh()))
            .collect();
        let (lower, diag, upper) = sys.jacobian(&x);
        let base = sys.residual(&x);
        let h = 1e-7;
        let m = x.len();
        for col in 0..m {
            for c in 0..3 {
                let mut xp = x.clone();
                xp[col][c] += h;
                let rp = sys.residual(&xp);
                for row in 0..m {
                    let fd = (rp[row] - base[row]) / h;
                    let exact = match row as isize - col as isize {
                        0 => diag[row].column(c).into_owned(),
                        1 => lower[row].column(c).into_owned(),
                        -1 => upper[row].column(c).into_owned(),
                        _ => Vec3::zeros(),
                    };
                    let scale = 1.0 + exact.amax();
                    assert!(
                        (fd - exact).amax() < 1e-5 * scale,
                        "row {row} col {col}.{c}"
                    );
                }
            }
        }
    }
}
