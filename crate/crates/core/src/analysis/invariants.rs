//! Qualitative properties every solution must have.

use crate::outcome::VortexSolution;

/// Human-readable list of violated properties; empty when the solution is
/// monotone, bounded and inside the unit disc `f² + g² < 1` at every
/// interior node.
pub fn invariant_violations(sol: &VortexSolution) -> Vec<String> {
    let (a, g, f) = (sol.a.values(), sol.g.values(), sol.f.values());
    let n = a.len();
    let mut out = Vec::new();
    if !sol.a.is_strictly_decreasing() {
        out.push("a is not strictly decreasing".to_string());
    }
    if !sol.f.is_strictly_increasing() {
        out.push("f is not strictly increasing".to_string());
    }
    if !(sol.g.is_identically_zero() || sol.g.is_strictly_decreasing()) {
        out.push("g is neither identically zero nor strictly decreasing".to_string());
    }
    let interior = 1..n - 1;
    if let Some(i) = interior.clone().find(|&i| !(a[i] > 0.0 && a[i] < 1.0)) {
        out.push(format!("a = {} outside (0, 1) at node {i}", a[i]));
    }
    if let Some(i) = interior.clone().find(|&i| !(f[i] > 0.0 && f[i] < 1.0)) {
        out.push(format!("f = {} outside (0, 1) at node {i}", f[i]));
    }
    if let Some(i) = interior.clone().find(|&i| !(g[i] >= 0.0)) {
        out.push(format!("g = {} negative at node {i}", g[i]));
    }
    if let Some(i) = interior
        .into_iter()
        .find(|&i| !(f[i] * f[i] + g[i] * g[i] < 1.0))
    {
        out.push(format!(
            "f² + g² = {} at node {i}",
            f[i] * f[i] + g[i] * g[i]
        ));
    }
    out
}
