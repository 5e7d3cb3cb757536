use super::*;
use crate::integrate::FnOde;

fn dummy_trajectory() -> Trajectory {
    Trajectory {
        first_node: 1,
        values: Vec::new(),
        slopes: Vec::new(),
        termination: Termination::ReachedEnd { radius: 1.0 },
        end: State::new(1.0, 0.0, 0.0),
        steps: 0,
    }
}

fn step_at(flip: f64) -> impl Fn(f64) -> Result<ShootingOutcome> {
    move |p| {
        let classification = if p < flip {
            Classification::Under
        } else {
            Classification::Over
        };
        Ok(ShootingOutcome {
            parameter: p,
            classification,
            trajectory: dummy_trajectory(),
            termination_radius: 1.0,
        })
    }
}

#[test]
fn bisection_finds_step() {
    let cfg = ShootConfig {
        param_tol: 1e-12,
        ..ShootConfig::default()
    };
    let bis = bisect(step_at(0.3), 0.0, 1.0, &cfg).unwrap();
    assert!((bis.parameter() - 0.3).abs() < 1e-12);
    let (u, o) = bis.bracket();
    assert!(u < 0.3 && o >= 0.3);
}

#[test]
fn sixty_halvings_beat_the_tolerance() {
    let width = 0.5f64.powi(60);
    assert!(width < 1e-12);
    let cfg = ShootConfig {
        param_tol: 1e-12,
        ..ShootConfig::default()
    };
    let bis = bisect(step_at(0.7), 0.0, 1.0, &cfg).unwrap();
    assert!(bis.history.len() <= 2 + 60);
}

#[test]
fn geometric_phase_handles_wide_brackets() {
    let cfg = ShootConfig {
        param_tol: 1e-14,
        ..ShootConfig::default()
    };
    let bis = bisect(step_at(3.7e-3), 1e-6, 1e6, &cfg).unwrap();
    assert!((bis.parameter() / 3.7e-3 - 1.0).abs() < 1e-13);
    assert!(bis.history.len() < 80);
}

#[test]
fn history_is_monotone() {
    let cfg = ShootConfig::default();
    let bis = bisect(step_at(0.42), 1e-3, 10.0, &cfg).unwrap();
    let max_under = bis
        .history
        .iter()
        .filter(|h| h.1 == Classification::Under)
        .map(|h| h.0)
        .fold(f64::MIN, f64::max);
    let min_over = bis
        .history
        .iter()
        .filter(|h| h.1 == Classification::Over)
        .map(|h| h.0)
        .fold(f64::MAX, f64::min);
    assert!(max_under < min_over);
}

#[test]
fn same_side_endpoints_fail() {
    let err = bisect(step_at(5.0), 0.0, 1.0, &ShootConfig::default()).unwrap_err();
    match err {
        VortexError::BracketFailure {
            lo_class, hi_class, ..
        } => {
            assert_eq!(lo_class, Classification::Under);
            assert_eq!(hi_class, Classification::Under);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn exhaustion_is_reported() {
    let cfg = ShootConfig {
        param_tol: 1e-15,
        max_bisections: 5,
        ..ShootConfig::default()
    };
    assert!(matches!(
        bisect(step_at(0.3), 0.0, 1.0, &cfg),
        Err(VortexError::BisectionExhausted { iterations: 5, .. })
    ));
}

#[test]
fn perturbed_bracket_gives_same_parameter() {
    let cfg = ShootConfig {
        param_tol: 1e-13,
        ..ShootConfig::default()
    };
    let a = bisect(step_at(0.3), 0.1, 0.9, &cfg).unwrap().parameter();
    let b = bisect(step_at(0.3), 0.11, 0.81, &cfg).unwrap().parameter();
    assert!((a - b).abs() < 10.0 * cfg.param_tol);
}

#[test]
fn config_validation() {
    assert!(ShootConfig::default().validate().is_ok());
    let bad = [
        ShootConfig {
            param_tol: 0.0,
            ..ShootConfig::default()
        },
        ShootConfig {
            max_bisections: 201,
            ..ShootConfig::default()
        },
        ShootConfig {
            bracket: Some((2.0, 1.0)),
            ..ShootConfig::default()
        },
        ShootConfig {
            integration_tol: 1e-3,
            ..ShootConfig::default()
        },
    ];
    for cfg in bad {
        assert!(cfg.validate().is_err());
    }
}

fn run(
    ode: &FnOde<impl Fn(f64, f64) -> f64 + Sync>,
    init: State,
    events: &EventSpec,
    grid: &RadialGrid,
) -> Trajectory {
    integrate_with_events(ode, init, events, grid.r_max(), 1e-10, grid.nodes()).unwrap()
}

#[test]
fn synthetic_gauge_classifications() {
    let grid = RadialGrid::geometric(20.0, 201, 1.0).unwrap();
    // a = exp(-r): ã = 1 - exp(-r) approaches one monotonically
    let decay = FnOde {
        weight: 0.0,
        r_start: 0.0,
        source: |_: f64, y: f64| y,
    };
    let tr = run(
        &decay,
        State::new(0.1, (-0.1f64).exp(), -(-0.1f64).exp()),
        &DECAY_EVENTS,
        &grid,
    );
    assert_eq!(
        classify_a(&tr, &grid, 1e-3).unwrap(),
        Classification::Converged
    );

    // ã = 2r²: a = 1 - 2r² hits zero at √½
    let parabola = FnOde {
        weight: 0.0,
        r_start: 0.0,
        source: |_: f64, _: f64| -4.0,
    };
    let tr = run(&parabola, State::new(0.1, 0.98, -0.4), &DECAY_EVENTS, &grid);
    assert_eq!(classify_a(&tr, &grid, 1e-3).unwrap(), Classification::Over);
    assert!((tr.termination.radius() - 0.5f64.sqrt()).abs() < 1e-9);
}

#[test]
fn synthetic_condensate_and_higgs_classifications() {
    let grid = RadialGrid::geometric(40.0, 401, 1.0).unwrap();
    let alpha = 0.3;
    // g = 0.5 exp(-αr)
    let g = FnOde {
        weight: 0.0,
        r_start: 0.0,
        source: move |_: f64, y: f64| alpha * alpha * y,
    };
    let r = 0.1;
    let init = State::new(
        r,
        0.5 * (-alpha * r).exp(),
        -alpha * 0.5 * (-alpha * r).exp(),
    );
    let tr = run(&g, init, &DECAY_EVENTS, &grid);
    assert_eq!(
        classify_g(&tr, &grid, 1e-3, 0.5).unwrap(),
        Classification::Converged
    );

    // f = tanh(r); a separatrix, so keep the run short
    let grid = RadialGrid::geometric(5.0, 51, 1.0).unwrap();
    let f = FnOde {
        weight: 0.0,
        r_start: 0.0,
        source: |_: f64, y: f64| -2.0 * y * (1.0 - y * y),
    };
    let tr = run(
        &f,
        State::new(r, r.tanh(), 1.0 - r.tanh().powi(2)),
        &RISE_EVENTS,
        &grid,
    );
    assert_eq!(
        classify_f(&tr, &grid, 1e-3).unwrap(),
        Classification::Converged
    );
}

#[test]
fn unresolved_far_field_is_an_error() {
    let grid = RadialGrid::geometric(10.0, 101, 1.0).unwrap();
    let flat = FnOde {
        weight: 0.0,
        r_start: 0.0,
        source: |_: f64, _: f64| 0.0,
    };
    let tr = run(&flat, State::new(0.1, 0.5, -1e-9), &DECAY_EVENTS, &grid);
    assert!(matches!(
        classify_g(&tr, &grid, 1e-3, 0.5),
        Err(VortexError::Unresolved {
            stage: Stage::Condensate,
            ..
        })
    ));
}

#[test]
fn abelian_and_degenerate_short_circuits() {
    let grid = Arc::new(crate::grid::make_grid(25.0, 400, 1.01).unwrap());
    let f = Profile::from_fn(grid, ProfileKind::HiggsF, f64::tanh).unwrap();
    let cfg = ShootConfig::default();
    let (shot, branch) = shoot_g(&f, &ModelParams::new(0.75, 1.0).unwrap(), &cfg).unwrap();
    assert_eq!(branch, CondensateBranch::Abelian);
    assert!(shot.profile.is_identically_zero());
    assert_eq!(shot.parameter, 0.0);
    let near = ModelParams::new(std::f64::consts::FRAC_1_SQRT_2 - 1e-30, 1.0).unwrap();
    let (_, branch) = shoot_g(&f, &near, &cfg).unwrap();
    assert!(matches!(
        branch,
        CondensateBranch::Abelian | CondensateBranch::BoundaryDegenerate
    ));
}

#[test]
fn measured_constants() {
    let grid = Arc::new(RadialGrid::geometric(20.0, 2001, 1.0).unwrap());
    let f = Profile::from_fn(grid.clone(), ProfileKind::HiggsF, |r| 0.7 * r / (1.0 + r)).unwrap();
    assert!((measure_m1(&f) - 0.7 / 1.01).abs() < 1e-12);
    let a = Profile::from_fn(grid, ProfileKind::GaugeA, |r| 1.0 - 0.4 * r * r).unwrap();
    assert!((measure_m2(&a) - 0.4).abs() < 1e-12);
}
