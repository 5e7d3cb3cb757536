//! Initial data at the first mesh node from the local expansions at `r = 0`.
//!
//! The leading-order starts are `ã = B r²`, `g = λ + c₂ r²` and `f̃ = D r`.
//! The refined variants apply one Picard sweep of the equivalent integral
//! equations to the leading term, evaluated with Gauss–Legendre quadrature
//! against the frozen coefficient profiles.

use crate::error::{check_finite, Result, VortexError};
use crate::params::ModelParams;
use crate::profile::Profile;
use crate::special::{bessel_i0, bessel_i1, bessel_k0, bessel_k1};

const QUAD_POINTS: usize = 16;

fn check_radius(r0: f64) -> Result<()> {
    check_finite("r0", r0)?;
    if r0 <= 0.0 {
        return Err(VortexError::InvalidArgument(format!(
            "series start radius must be positive, got {r0}"
        )));
    }
    Ok(())
}

/// `(ã(r0), ã'(r0)) = (B r0², 2 B r0)`; `B = 0` is the trivial non-shot.
pub fn series_start_a(b: f64, r0: f64) -> Result<(f64, f64)> {
    check_radius(r0)?;
    check_finite("B", b)?;
    if b < 0.0 {
        return Err(VortexError::InvalidArgument(format!(
            "B must be non-negative, got {b}"
        )));
    }
    Ok((b * r0 * r0, 2.0 * b * r0))
}

/// Gauge start when the Higgs coefficient does not vanish at the origin.
///
/// With `f ≈ f(0)` the local solutions with `a(0) = 1` are
/// `x K₁(x) + c x I₁(x)`, `x = m r`, `m = β f(0)`. The start is
/// `a = x K₁(x) - (B - m²/2) r² · 2 I₁(x) / x`, so the decaying solution of
/// the constant-mass problem sits at `B = m²/2` and the start reduces to
/// `1 - B r²` as `m → 0`.
pub fn series_start_a_massive(b: f64, mass: f64, r0: f64) -> Result<(f64, f64)> {
    series_start_a(b, r0)?;
    check_finite("mass", mass)?;
    if mass <= 0.0 {
        return Err(VortexError::InvalidArgument(format!(
            "gauge mass must be positive, got {mass}"
        )));
    }
    let x = mass * r0;
    let c = b - 0.5 * mass * mass;
    let a = x * bessel_k1(x) - c * 2.0 * r0 * bessel_i1(x) / mass;
    let ap = -mass * x * bessel_k0(x) - 2.0 * c * r0 * bessel_i0(x);
    Ok((1.0 - a, -ap))
}

/// One Picard sweep of
/// `ã(r) = B r² + (β²/2) ∫₀ʳ s (r²/s² - 1) f²(s) (ã(s) - 1) ds`
/// started from `ã₀ = B s²`.
pub fn series_start_a_refined(b: f64, f: &Profile, beta: f64, r0: f64) -> Result<(f64, f64)> {
    let (lead, lead_p) = series_start_a(b, r0)?;
    let f0 = f.values()[0];
    if f0.abs() > 1e-12 {
        return Err(VortexError::InvalidArgument(format!(
            "refined gauge start needs f(0) = 0, got {f0}"
        )));
    }
    let (mut value, mut deriv) = (0.0, 0.0);
    for (t, w) in gauss_legendre(QUAD_POINTS) {
        let s = r0 * t;
        let fs = odd_near_origin(f, s);
        let inner = fs * fs * (b * s * s - 1.0);
        value += w * (r0 * r0 / s - s) * inner;
        deriv += w * inner / s;
    }
    let b2 = beta * beta;
    Ok((lead + 0.5 * b2 * r0 * value, lead_p + b2 * r0 * r0 * deriv))
}

/// `(g(r0), g'(r0)) = (λ + c₂ r0², 2 c₂ r0)` with
/// `c₂ = λ (α² + (λ² - 1)/2) / 4`.
pub fn series_start_g(lambda: f64, params: &ModelParams, r0: f64) -> Result<(f64, f64)> {
    check_radius(r0)?;
    check_lambda(lambda, params)?;
    let alpha = params.alpha();
    let c2 = lambda * (alpha * alpha + 0.5 * (lambda * lambda - 1.0)) / 4.0;
    Ok((lambda + c2 * r0 * r0, 2.0 * c2 * r0))
}

/// One Picard sweep of
/// `g(r) = λ + ∫₀ʳ s ln(r/s) g(s) (α² + (f² + g² - 1)/2) ds` from `g₀ = λ`.
pub fn series_start_g_refined(
    lambda: f64,
    params: &ModelParams,
    f: &Profile,
    r0: f64,
) -> Result<(f64, f64)> {
    check_radius(r0)?;
    check_lambda(lambda, params)?;
    let alpha2 = params.alpha() * params.alpha();
    let (mut value, mut deriv) = (0.0, 0.0);
    // s = r0 u² smooths the logarithmic endpoint
    for (u, wu) in gauss_legendre(QUAD_POINTS) {
        let (t, w) = (u * u, 2.0 * u * wu);
        let s = r0 * t;
        let fs = odd_near_origin(f, s);
        let kernel = lambda * (alpha2 + 0.5 * (fs * fs + lambda * lambda - 1.0));
        value += w * s * (r0 / s).ln() * kernel;
        deriv += w * (s / r0) * kernel;
    }
    Ok((lambda + r0 * value, r0 * deriv))
}

fn check_lambda(lambda: f64, params: &ModelParams) -> Result<()> {
    check_finite("lambda", lambda)?;
    let cap = params.g_cap();
    if !(lambda > 0.0 && lambda < cap) {
        return Err(VortexError::InvalidArgument(format!(
            "lambda {lambda} outside (0, {cap})"
        )));
    }
    Ok(())
}

/// `(f̃(r0), f̃'(r0)) = (D r0, D)`.
pub fn series_start_f(d: f64, r0: f64) -> Result<(f64, f64)> {
    check_radius(r0)?;
    check_finite("D", d)?;
    if d <= 0.0 {
        return Err(VortexError::InvalidArgument(format!(
            "D must be positive, got {d}"
        )));
    }
    Ok((d * r0, d))
}

/// One Picard sweep of
/// `f̃(r) = D r + ½ ∫₀ʳ r (1 - s²/r²) f̃ {(a² - 1)/s² + (f̃² + g² - 1)/2} ds`
/// from `f̃₀ = D s`.
pub fn series_start_f_refined(d: f64, a: &Profile, g: &Profile, r0: f64) -> Result<(f64, f64)> {
    let (lead, lead_p) = series_start_f(d, r0)?;
    let (mut value, mut deriv) = (0.0, 0.0);
    for (t, w) in gauss_legendre(QUAD_POINTS) {
        let s = r0 * t;
        let (a_s, g_s) = (even_near_origin(a, s), even_near_origin(g, s));
        let fs = d * s;
        let bracket = (a_s * a_s - 1.0) / (s * s) + 0.5 * (fs * fs + g_s * g_s - 1.0);
        value += w * r0 * (1.0 - t * t) * fs * bracket;
        deriv += w * (1.0 + t * t) * fs * bracket;
    }
    Ok((lead + 0.5 * r0 * value, lead_p + 0.5 * r0 * deriv))
}

/// Coefficient profile inside the first mesh interval, where the generic
/// interpolant does not know the parity of the field: `y₀ + c s²`.
fn even_near_origin(p: &Profile, s: f64) -> f64 {
    let (nodes, v) = (p.grid().nodes(), p.values());
    if s >= nodes[1] {
        return p.eval_clamped(s);
    }
    let t = s / nodes[1];
    v[0] + (v[1] - v[0]) * t * t
}

/// Odd counterpart of [`even_near_origin`]: `c s`.
fn odd_near_origin(p: &Profile, s: f64) -> f64 {
    let nodes = p.grid().nodes();
    if s >= nodes[1] {
        return p.eval_clamped(s);
    }
    p.values()[1] * s / nodes[1]
}

/// Gauss–Legendre nodes and weights mapped to `[0, 1]`.
fn gauss_legendre(n: usize) -> impl Iterator<Item = (f64, f64)> {
    (0..n).map(move |i| {
        // Newton iteration on P_n from the Chebyshev guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        (0.5 * (1.0 - x), 0.5 * w)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use crate::profile::ProfileKind;
    use std::sync::Arc;

    #[test]
    fn quadrature_integrates_polynomials() {
        let s: f64 = gauss_legendre(QUAD_POINTS)
            .map(|(t, w)| w * t.powi(7))
            .sum();
        assert!((s - 0.125).abs() < 1e-15);
        let total: f64 = gauss_legendre(QUAD_POINTS).map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn leading_gauge_start() {
        let (v, d) = series_start_a(1.0, 1e-3).unwrap();
        assert!((v - 1e-6).abs() < 1e-21);
        assert!((d - 2e-3).abs() < 1e-18);
        assert_eq!(series_start_a(0.0, 0.5).unwrap(), (0.0, 0.0));
        assert!(series_start_a(-1.0, 1e-3).is_err());
    }

    #[test]
    fn massive_gauge_start_tends_to_leading_term() {
        let (v, d) = series_start_a(0.4, 1e-3).unwrap();
        let (vm, dm) = series_start_a_massive(0.4, 1e-6, 1e-3).unwrap();
        assert!((v - vm).abs() < 1e-12);
        assert!((d - dm).abs() < 1e-9);
        assert!(series_start_a_massive(0.4, 0.0, 1e-3).is_err());
    }

    #[test]
    fn refined_gauge_start_within_picard_bound() {
        // f = M1 s near the origin
        let m1 = 0.8;
        let beta = 1.3;
        let grid = Arc::new(RadialGrid::geometric(20.0, 400, 1.0).unwrap());
        let f = Profile::from_fn(grid, ProfileKind::HiggsF, |s| m1 * s).unwrap();
        for &r0 in &[1e-3, 1e-2, 0.05] {
            let (lead, _) = series_start_a(0.7, r0).unwrap();
            let (refined, _) = series_start_a_refined(0.7, &f, beta, r0).unwrap();
            let bound = 3.0 * beta * beta * m1 * m1 * r0.powi(4) / 8.0;
            assert!((refined - lead).abs() <= bound);
            // the correction is -(β² M1² / 8) r0⁴ to leading order
            let expected = -beta * beta * m1 * m1 * r0.powi(4) / 8.0;
            assert!(((refined - lead) / expected - 1.0).abs() < 1e-2);
        }
    }

    #[test]
    fn condensate_taylor_coefficient() {
        let p = ModelParams::new(0.3, 1.0).unwrap();
        let (v, d) = series_start_g(0.5, &p, 1e-3).unwrap();
        let c2: f64 = 0.5 * (0.09 + (0.25 - 1.0) / 2.0) / 4.0;
        assert!((c2 + 0.035625).abs() < 1e-15);
        assert!((v - (0.5 - 3.5625e-8)).abs() < 1e-16);
        assert!((d - 2.0 * c2 * 1e-3).abs() < 1e-18);
    }

    #[test]
    fn condensate_start_decreases_below_cap() {
        for &alpha in &[0.05, 0.3, 0.5, 0.7] {
            let p = ModelParams::new(alpha, 1.0).unwrap();
            let cap = p.g_cap();
            for k in 1..100 {
                let lambda = cap * k as f64 / 100.0;
                let (_, slope) = series_start_g(lambda, &p, 1e-3).unwrap();
                assert!(slope < 0.0, "alpha {alpha} lambda {lambda}");
            }
        }
    }

    #[test]
    fn condensate_start_rejects_outside_cap() {
        let p = ModelParams::new(0.3, 1.0).unwrap();
        assert!(series_start_g(p.g_cap(), &p, 1e-3).is_err());
        assert!(series_start_g(0.0, &p, 1e-3).is_err());
        let abelian = ModelParams::new(0.75, 1.0).unwrap();
        assert!(series_start_g(0.1, &abelian, 1e-3).is_err());
        let (v, d) = series_start_g(1e-12, &p, 1e-3).unwrap();
        assert!(v < 1e-11 && d.abs() < 1e-14);
    }

    #[test]
    fn refined_condensate_matches_taylor() {
        let p = ModelParams::new(0.3, 1.0).unwrap();
        let grid = Arc::new(RadialGrid::geometric(20.0, 400, 1.0).unwrap());
        let f = Profile::zeros(grid, ProfileKind::HiggsF);
        let r0 = 1e-2;
        let (v, d) = series_start_g(0.5, &p, r0).unwrap();
        let (vr, dr) = series_start_g_refined(0.5, &p, &f, r0).unwrap();
        assert!((v - vr).abs() < 1e-12);
        assert!((d - dr).abs() < 1e-10);
    }

    #[test]
    fn leading_higgs_start() {
        assert_eq!(series_start_f(1.0, 1e-3).unwrap(), (1e-3, 1.0));
        assert_eq!(series_start_f(2.0, 1e-3).unwrap(), (2e-3, 2.0));
        assert!(series_start_f(0.0, 1e-3).is_err());
    }

    #[test]
    fn refined_higgs_start_within_picard_bound() {
        let grid = Arc::new(RadialGrid::geometric(20.0, 2001, 1.0).unwrap());
        let m2 = 0.6;
        let a = Profile::from_fn(grid.clone(), ProfileKind::GaugeA, |s| 1.0 - m2 * s * s).unwrap();
        let g = Profile::from_fn(grid, ProfileKind::CondensateG, |_| 0.3).unwrap();
        let d = 0.9;
        for &r0 in &[1e-3, 1e-2] {
            let (lead, _) = series_start_f(d, r0).unwrap();
            let (refined, _) = series_start_f_refined(d, &a, &g, r0).unwrap();
            let bound = (2.0 * m2 + 2.5) * (d / 2.0) * r0.powi(3);
            assert!((refined - lead).abs() <= bound, "r0 {r0}");
            assert!(refined != lead);
        }
    }
}
