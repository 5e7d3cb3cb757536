use std::sync::Arc;

use vortex_core::shoot::{
    measure_m1, measure_m2, shoot_a, shoot_f, shoot_g, shot_a, shot_f, shot_g, ShootConfig,
};
use vortex_core::{
    make_grid, Classification, CondensateBranch, ModelParams, Profile, ProfileKind, RadialGrid,
};

/// `K₁(x) = x ∫₁^∞ e^{-xt} √(t² - 1) dt`, with `t = 1 + s²` to remove the
/// square-root endpoint and a plain composite Simpson rule in `s`.
fn k1_quadrature(x: f64) -> f64 {
    let s_max = (60.0 / x).sqrt();
    let n = 20_000;
    let h = s_max / n as f64;
    let g = |s: f64| {
        let t = 1.0 + s * s;
        // dt = 2s ds, √(t² - 1) = s √(2 + s²)
        (-x * (t - 1.0)).exp() * s * (2.0 + s * s).sqrt() * 2.0 * s
    };
    let mut sum = g(0.0) + g(s_max);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * g(k as f64 * h);
    }
    x * (-x).exp() * sum * h / 3.0
}

fn default_grid() -> Arc<RadialGrid> {
    Arc::new(RadialGrid::default())
}

#[test]
fn quadrature_oracle_reproduces_k1_at_one() {
    assert!((k1_quadrature(1.0) - 0.601_907_230_2).abs() < 1e-10);
}

#[test]
fn frozen_unit_higgs_gives_bessel_gauge_profile() {
    let grid = default_grid();
    let one = Profile::from_fn(grid.clone(), ProfileKind::HiggsF, |_| 1.0).unwrap();
    let cfg = ShootConfig::default();
    for beta in [0.5, 1.0, 2.0] {
        let shot = shoot_a(&one, beta, &cfg).unwrap();
        let mut err: f64 = 0.0;
        for (&r, &a) in grid.nodes().iter().zip(shot.profile.values()).skip(1) {
            let x = beta * r;
            err = err.max((a - x * k1_quadrature(x)).abs());
        }
        assert!(err < 1e-6, "beta {beta}: sup error {err:e}");
        assert_eq!(shot.profile.values()[0], 1.0);
    }
}

#[test]
fn gauge_bracket_endpoints() {
    let grid = default_grid();
    let f = Profile::from_fn(grid, ProfileKind::HiggsF, f64::tanh).unwrap();
    let cfg = ShootConfig::default();
    for beta in [0.5, 1.0, 2.0] {
        let lo = shot_a(1e-6, &f, beta, &cfg).unwrap();
        assert_eq!(lo.classification, Classification::Under);
        let hi = shot_a(1e3 * beta * beta, &f, beta, &cfg).unwrap();
        assert_eq!(hi.classification, Classification::Over);
    }
}

#[test]
fn gauge_profile_properties() {
    let grid = default_grid();
    let f = Profile::from_fn(grid.clone(), ProfileKind::HiggsF, f64::tanh).unwrap();
    let shot = shoot_a(&f, 1.0, &ShootConfig::default()).unwrap();
    let a = &shot.profile;
    assert!(a.is_strictly_decreasing());
    let n = a.values().len();
    assert!(a.values()[1..n - 1].iter().all(|&v| v > 0.0 && v < 1.0));
    assert!(a.values()[n - 1] <= 1e-3);
    let m2 = measure_m2(a);
    for (&r, &v) in grid.nodes().iter().zip(a.values()).skip(1) {
        if r > 1.0 {
            break;
        }
        assert!(1.0 - v <= m2 * r * r * (1.0 + 1e-12));
    }
    assert!((m2 - shot.parameter).abs() < 0.2 * shot.parameter);
}

#[test]
fn perturbed_bracket_reproduces_gauge_parameter() {
    let grid = default_grid();
    let f = Profile::from_fn(grid, ProfileKind::HiggsF, f64::tanh).unwrap();
    let cfg = ShootConfig::default();
    let base = shoot_a(&f, 1.0, &cfg).unwrap();
    let (lo, hi) = (base.parameter * 0.5, base.parameter * 2.0);
    let a = shoot_a(&f, 1.0, &cfg.with_bracket(Some((lo * 0.9, hi * 1.1)))).unwrap();
    let b = shoot_a(&f, 1.0, &cfg.with_bracket(Some((lo * 1.1, hi * 0.9)))).unwrap();
    assert!((a.parameter - b.parameter).abs() < 10.0 * cfg.param_tol * a.parameter);
    assert!((a.parameter - base.parameter).abs() < 10.0 * cfg.param_tol * a.parameter);
}

#[test]
fn condensate_endpoints_and_trivial_branch() {
    let grid = default_grid();
    let f = Profile::from_fn(grid, ProfileKind::HiggsF, f64::tanh).unwrap();
    let cfg = ShootConfig::default();
    // tanh is a shallow well: no bound state at α = 0.3
    let p = ModelParams::new(0.3, 1.0).unwrap();
    let near_cap = shot_g((1.0 - 1e-6) * p.g_cap(), &f, &p, &cfg).unwrap();
    assert_eq!(near_cap.classification, Classification::Under);
    let (shot, branch) = shoot_g(&f, &p, &cfg).unwrap();
    assert_eq!(branch, CondensateBranch::Trivial);
    assert!(shot.profile.is_identically_zero());
}

#[test]
fn condensate_bound_state_for_deep_well() {
    let grid = Arc::new(make_grid(40.0, 4000, 1.001).unwrap());
    // f vanishing over a wide core binds the condensate
    let f = Profile::from_fn(grid, ProfileKind::HiggsF, |r| (r / 4.0).tanh()).unwrap();
    let p = ModelParams::new(0.2, 1.0).unwrap();
    let cfg = ShootConfig::default();
    let tiny = shot_g(1e-6 * p.g_cap(), &f, &p, &cfg).unwrap();
    assert_eq!(tiny.classification, Classification::Over);
    let (shot, branch) = shoot_g(&f, &p, &cfg).unwrap();
    assert_eq!(branch, CondensateBranch::Condensed);
    let g = &shot.profile;
    assert!(g.values()[0] > 0.0 && g.values()[0] < p.g_cap());
    assert!(g.is_strictly_decreasing());
    assert!(*g.values().last().unwrap() <= 1e-3 * g.values()[0]);
}

#[test]
fn higgs_profile_properties() {
    let grid = default_grid();
    let a = Profile::from_fn(grid.clone(), ProfileKind::GaugeA, |r| (1.0 + r * r).recip()).unwrap();
    let g = Profile::zeros(grid.clone(), ProfileKind::CondensateG);
    let cfg = ShootConfig::default();
    let m2 = measure_m2(&a);
    assert_eq!(
        shot_f(1e-4, &a, &g, &cfg).unwrap().classification,
        Classification::Under
    );
    let big = (2.0 * m2 * 1e3).sqrt();
    assert_eq!(
        shot_f(big, &a, &g, &cfg).unwrap().classification,
        Classification::Over
    );

    let shot = shoot_f(&a, &g, &cfg).unwrap();
    let f = &shot.profile;
    assert!(f.is_strictly_increasing());
    let n = f.values().len();
    assert!(f.values()[1..n - 1].iter().all(|&v| v > 0.0 && v < 1.0));
    assert!(f.values()[n - 1] >= 1.0 - 1e-3);
    assert!(measure_m1(f).is_finite());
}
