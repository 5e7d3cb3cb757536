//! Three-point finite differences on a non-uniform grid and the discrete
//! form of the profile equations.

use crate::params::ModelParams;

/// Weights on nodes `i - 1, i, i + 1` for the first and second derivative.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Stencil {
    pub d1: [f64; 3],
    pub d2: [f64; 3],
}

impl Stencil {
    fn at(nodes: &[f64], i: usize) -> Self {
        let hm = nodes[i] - nodes[i - 1];
        let hp = nodes[i + 1] - nodes[i];
        let s = hm * hp * (hm + hp);
        Self {
            d1: [-hp * hp / s, (hp * hp - hm * hm) / s, hm * hm / s],
            d2: [2.0 * hp / s, -2.0 * (hm + hp) / s, 2.0 * hm / s],
        }
    }
}

/// Stencils for every interior node; entry `k` belongs to node `k + 1`.
pub(crate) fn interior_stencils(nodes: &[f64]) -> Vec<Stencil> {
    (1..nodes.len() - 1)
        .map(|i| Stencil::at(nodes, i))
        .collect()
}

/// Coefficients `(c1, c2)` of `y(0) = c1 y(r1) + c2 y(r2)` for an even
/// function `y = y0 + y2 r²`; equivalent to `y'(0) = 0` at second order.
pub(crate) fn even_extrapolation(nodes: &[f64]) -> (f64, f64) {
    let (q1, q2) = (nodes[1] * nodes[1], nodes[2] * nodes[2]);
    (q2 / (q2 - q1), -q1 / (q2 - q1))
}

fn dot(w: &[f64; 3], y: [f64; 3]) -> f64 {
    w[0] * y[0] + w[1] * y[1] + w[2] * y[2]
}

/// Left-hand sides of the three equations at an interior node.
///
/// `a`, `g` and `u = f / r` are given on nodes `i - 1, i, i + 1`; the Higgs
/// equation is written as `r u'' + 3u' - (a² - 1) u / r - ½(f² + g² - 1) f`,
/// which is regular at the origin.
pub(crate) fn node_residual(
    params: &ModelParams,
    r: f64,
    st: &Stencil,
    a: [f64; 3],
    g: [f64; 3],
    u: [f64; 3],
) -> [f64; 3] {
    let (alpha, beta) = (params.alpha(), params.beta());
    let (ai, gi, ui) = (a[1], g[1], u[1]);
    let fi = r * ui;
    let pot = 0.5 * (fi * fi + gi * gi - 1.0);
    let ra = dot(&st.d2, a) - dot(&st.d1, a) / r - beta * beta * fi * fi * ai;
    let rg = dot(&st.d2, g) + dot(&st.d1, g) / r - alpha * alpha * gi - pot * gi;
    let rf = r * dot(&st.d2, u) + 3.0 * dot(&st.d1, u) - (ai * ai - 1.0) * ui / r - pot * fi;
    [ra, rg, rf]
}

/// Node values of `u = f / r`, with `u(0)` from even extrapolation.
pub(crate) fn scaled_higgs(nodes: &[f64], f: &[f64]) -> Vec<f64> {
    let mut u: Vec<f64> = nodes
        .iter()
        .zip(f)
        .map(|(&r, &v)| if r > 0.0 { v / r } else { 0.0 })
        .collect();
    let (c1, c2) = even_extrapolation(nodes);
    u[0] = c1 * u[1] + c2 * u[2];
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_quadratics() {
        let nodes = [0.3, 0.35, 0.5];
        let st = Stencil::at(&nodes, 1);
        let y = |r: f64| 2.0 - 3.0 * r + 5.0 * r * r;
        let v = [y(0.3), y(0.35), y(0.5)];
        assert!((dot(&st.d1, v) - (-3.0 + 10.0 * 0.35)).abs() < 1e-12);
        assert!((dot(&st.d2, v) - 10.0).abs() < 1e-10);
    }

    #[test]
    fn even_extrapolation_is_exact_for_even_quadratics() {
        let nodes = [0.0, 0.01, 0.025];
        let (c1, c2) = even_extrapolation(&nodes);
        let y = |r: f64| 0.4 - 7.0 * r * r;
        assert!((c1 * y(0.01) + c2 * y(0.025) - 0.4).abs() < 1e-14);
    }
}
