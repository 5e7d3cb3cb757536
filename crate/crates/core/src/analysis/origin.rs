//! Bounds on the local behaviour at the vortex core.

use serde::Serialize;

use crate::outcome::VortexSolution;

/// Maxima over interior nodes with `r ≤ r_lim`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OriginBounds {
    /// `max (1 - a) / r²`
    pub a_curvature: f64,
    /// `max f / r`
    pub f_slope: f64,
    /// `max |g - g(0)| / r²`
    pub g_curvature: f64,
}

pub fn origin_bounds(sol: &VortexSolution, r_lim: f64) -> OriginBounds {
    let nodes = sol.a.grid().nodes();
    let (a, g, f) = (sol.a.values(), sol.g.values(), sol.f.values());
    let g0 = g[0];
    let mut out = OriginBounds {
        a_curvature: 0.0,
        f_slope: 0.0,
        g_curvature: 0.0,
    };
    for (i, &r) in nodes
        .iter()
        .enumerate()
        .skip(1)
        .take_while(|(_, &r)| r <= r_lim)
    {
        out.a_curvature = out.a_curvature.max((1.0 - a[i]) / (r * r));
        out.f_slope = out.f_slope.max(f[i] / r);
        out.g_curvature = out.g_curvature.max((g[i] - g0).abs() / (r * r));
    }
    out
}
