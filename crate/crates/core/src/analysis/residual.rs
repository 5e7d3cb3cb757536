//! Finite-difference residuals of a computed solution.

use crate::outcome::VortexSolution;
use crate::params::ModelParams;
use crate::profile::Profile;

use super::stencil::{interior_stencils, node_residual, scaled_higgs};

/// Sup-norm residuals of the `a`, `g` and `f` equations of `sol`.
pub fn residual_norms(sol: &VortexSolution) -> [f64; 3] {
    residuals_of(&sol.params, &sol.a, &sol.g, &sol.f)
}

/// Sup over interior nodes of each equation's left-hand side, using
/// second-order centered differences on the profiles' grid.
pub fn residuals_of(params: &ModelParams, a: &Profile, g: &Profile, f: &Profile) -> [f64; 3] {
    pointwise_residuals(params, a, g, f).map(|r| r.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Left-hand sides of the `a`, `g` and `f` equations at every interior node
/// (entry `k` belongs to node `k + 1`).
pub fn pointwise_residuals(
    params: &ModelParams,
    a: &Profile,
    g: &Profile,
    f: &Profile,
) -> [Vec<f64>; 3] {
    let nodes = a.grid().nodes();
    let (a, g) = (a.values(), g.values());
    let u = scaled_higgs(nodes, f.values());
    let mut out: [Vec<f64>; 3] = Default::default();
    for (k, st) in interior_stencils(nodes).iter().enumerate() {
        let i = k + 1;
        let w = |y: &[f64]| [y[i - 1], y[i], y[i + 1]];
        let res = node_residual(params, nodes[i], st, w(a), w(g), w(&u));
        for (o, r) in out.iter_mut().zip(res) {
            o.push(r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::grid::make_grid;
    use crate::profile::ProfileKind;
    use crate::special::bessel_i1;

    fn gauge_residual(n: usize, stretch: f64) -> f64 {
        let grid = Arc::new(make_grid(10.0, n, stretch).unwrap());
        let scale = 10.0 * bessel_i1(10.0);
        let a = Profile::from_fn(grid.clone(), ProfileKind::GaugeA, |r| {
            r * bessel_i1(r) / scale
        })
        .unwrap();
        let one = Profile::from_fn(grid.clone(), ProfileKind::HiggsF, |_| 1.0).unwrap();
        let zero = Profile::zeros(grid, ProfileKind::CondensateG);
        residuals_of(&ModelParams::new(0.9, 1.0).unwrap(), &a, &zero, &one)[0]
    }

    #[test]
    fn bessel_solution_has_second_order_residual() {
        // y = r I₁(r) is the regular solution of y'' - y'/r - y = 0
        let coarse = gauge_residual(500, 1.005);
        let fine = gauge_residual(999, 1.005f64.sqrt());
        assert!(coarse < 1e-3, "{coarse:e}");
        assert!(coarse / fine > 3.5, "{coarse:e} -> {fine:e}");
    }
}
