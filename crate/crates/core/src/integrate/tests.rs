use super::*;

fn no_events() -> EventSpec {
    EventSpec {
        ceiling: None,
        floor: None,
        slope: SlopeEvent::None,
        escape_bound: 1e6,
    }
}

fn linear(
    weight: f64,
    source: impl Fn(f64, f64) -> f64 + Sync,
) -> FnOde<impl Fn(f64, f64) -> f64 + Sync> {
    FnOde {
        weight,
        r_start: 0.0,
        source,
    }
}

#[test]
fn single_step_on_free_particle_is_exact() {
    let ode = linear(0.0, |_, _| 0.0);
    let out = step_rk(&ode, State::new(1.0, 2.0, 3.0), 0.1).unwrap();
    assert!((out.state.r - 1.1).abs() < 1e-15);
    assert!((out.state.y - 2.3).abs() < 1e-15);
    assert!((out.state.yp - 3.0).abs() < 1e-15);
    assert!(out.error[0].abs() < 1e-15 && out.error[1].abs() < 1e-15);
}

#[test]
fn step_rejects_bad_size() {
    let ode = linear(0.0, |_, _| 0.0);
    assert!(step_rk(&ode, State::new(0.0, 0.0, 0.0), 0.0).is_err());
    assert!(step_rk(&ode, State::new(0.0, 0.0, 0.0), -1.0).is_err());
}

#[test]
fn harmonic_oscillator_to_pi() {
    let ode = linear(0.0, |_, y| -y);
    let pi = std::f64::consts::PI;
    let tr = integrate_with_events(
        &ode,
        State::new(0.0, 1.0, 0.0),
        &no_events(),
        pi,
        1e-10,
        &[],
    )
    .unwrap();
    assert!(matches!(tr.termination, Termination::ReachedEnd { .. }));
    assert!((tr.end.y + 1.0).abs() < 1e-8);
    assert!(tr.end.yp.abs() < 1e-8);
}

#[test]
fn global_error_shrinks_with_tolerance() {
    let ode = linear(0.0, |_, y| -y);
    let err = |tol| {
        let tr = integrate_with_events(
            &ode,
            State::new(0.0, 0.0, 1.0),
            &no_events(),
            10.0,
            tol,
            &[],
        )
        .unwrap();
        (tr.end.y - 10f64.sin()).abs()
    };
    let coarse = err(1e-6);
    let fine = err(1e-10);
    assert!(fine < coarse);
    assert!(fine < 1e-8);
}

#[test]
fn dense_output_reproduces_sine_between_steps() {
    let ode = linear(0.0, |_, y| -y);
    let nodes: Vec<f64> = (0..=300).map(|i| i as f64 * 0.01).collect();
    let tr = integrate_with_events(
        &ode,
        State::new(0.0, 0.0, 1.0),
        &no_events(),
        3.0,
        1e-11,
        &nodes,
    )
    .unwrap();
    assert_eq!(tr.values.len(), nodes.len());
    for (i, &r) in nodes.iter().enumerate() {
        assert!((tr.values[i] - r.sin()).abs() < 1e-8, "r = {r}");
        assert!((tr.slopes[i] - r.cos()).abs() < 1e-8, "r = {r}");
    }
}

/// First zero of J0 by scanning the power series on a fine grid.
fn j0_zero_by_scan() -> f64 {
    let j0 = |x: f64| {
        let q = -x * x / 4.0;
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..60 {
            term *= q / (k * k) as f64;
            sum += term;
        }
        sum
    };
    let h = 1e-6;
    let mut x = 2.0;
    while j0(x + h) > 0.0 {
        x += h;
    }
    x + 0.5 * h
}

#[test]
fn bessel_equation_first_zero() {
    // y'' + y'/r + y = 0 from the series start y = 1 - r²/4
    let ode = FnOde {
        weight: 1.0,
        r_start: 1e-3,
        source: |_: f64, y: f64| -y,
    };
    let r0 = 1e-3;
    let init = State::new(r0, 1.0 - r0 * r0 / 4.0, -r0 / 2.0);
    let events = EventSpec {
        floor: Some(0.0),
        ..no_events()
    };
    let tr = integrate_with_events(&ode, init, &events, 5.0, 1e-12, &[]).unwrap();
    let Termination::Event { kind, radius } = tr.termination else {
        panic!("no event: {:?}", tr.termination);
    };
    assert_eq!(kind, EventKind::Floor);
    let oracle = j0_zero_by_scan();
    assert!((oracle - 2.404826).abs() < 1e-5);
    assert!((radius - oracle).abs() < 1e-5);
}

#[test]
fn ceiling_event_on_parabola() {
    // y'' = 1 from y = 0, y' = 0 reaches 1 at r = √2
    let ode = linear(0.0, |_, _| 1.0);
    let events = EventSpec {
        ceiling: Some(1.0),
        ..no_events()
    };
    let tr =
        integrate_with_events(&ode, State::new(0.0, 0.0, 0.0), &events, 5.0, 1e-10, &[]).unwrap();
    match tr.termination {
        Termination::Event { kind, radius } => {
            assert_eq!(kind, EventKind::Ceiling);
            assert!((radius - 2f64.sqrt()).abs() < 1e-8);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn slope_event_on_sine() {
    let ode = linear(0.0, |_, y| -y);
    let events = EventSpec {
        slope: SlopeEvent::TurnsNegative,
        ..no_events()
    };
    let tr =
        integrate_with_events(&ode, State::new(0.0, 0.0, 1.0), &events, 5.0, 1e-10, &[]).unwrap();
    match tr.termination {
        Termination::Event { kind, radius } => {
            assert_eq!(kind, EventKind::Slope);
            assert!((radius - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn events_that_never_fire() {
    let ode = linear(0.0, |_, y| -y);
    let events = EventSpec {
        ceiling: Some(2.0),
        floor: Some(-2.0),
        ..no_events()
    };
    let tr =
        integrate_with_events(&ode, State::new(0.0, 0.0, 1.0), &events, 10.0, 1e-9, &[]).unwrap();
    assert_eq!(tr.termination, Termination::ReachedEnd { radius: 10.0 });
}

#[test]
fn event_radius_is_stable_under_tolerance() {
    let ode = linear(0.0, |_, _| 1.0);
    let events = EventSpec {
        ceiling: Some(1.0),
        ..no_events()
    };
    let at = |tol| {
        integrate_with_events(&ode, State::new(0.0, 0.0, 0.0), &events, 5.0, tol, &[])
            .unwrap()
            .termination
            .radius()
    };
    assert!((at(1e-8) - at(1e-9)).abs() < 1e-7);
}

#[test]
fn value_event_wins_tie_with_slope() {
    // y = 1 - (r - 1)², peak at r = 1 exactly at the ceiling
    let ode = linear(0.0, |_, _| -2.0);
    let events = EventSpec {
        ceiling: Some(1.0),
        slope: SlopeEvent::TurnsNegative,
        ..no_events()
    };
    let tr =
        integrate_with_events(&ode, State::new(0.0, 0.0, 2.0), &events, 3.0, 1e-10, &[]).unwrap();
    let Termination::Event { radius, .. } = tr.termination else {
        panic!()
    };
    assert!((radius - 1.0).abs() < 1e-6);
}

#[test]
fn divergence_is_reported() {
    let ode = linear(0.0, |_, y| y);
    let events = EventSpec {
        escape_bound: 1e3,
        ..no_events()
    };
    let tr =
        integrate_with_events(&ode, State::new(0.0, 1.0, 1.0), &events, 50.0, 1e-9, &[]).unwrap();
    assert!(matches!(tr.termination, Termination::Diverged { .. }));
    assert!(tr.end.y > 1e3);
}

#[test]
fn rejects_bad_arguments() {
    let ode = linear(0.0, |_, y| -y);
    let s = State::new(0.0, 0.0, 1.0);
    assert!(integrate_with_events(&ode, s, &no_events(), 1.0, 1e-3, &[]).is_err());
    assert!(integrate_with_events(&ode, s, &no_events(), 1.0, 1e-16, &[]).is_err());
    assert!(integrate_with_events(&ode, s, &no_events(), -1.0, 1e-9, &[]).is_err());
    let bad = EventSpec {
        ceiling: Some(0.0),
        floor: Some(1.0),
        ..no_events()
    };
    assert!(integrate_with_events(&ode, s, &bad, 1.0, 1e-9, &[]).is_err());
    let nan = State::new(0.0, f64::NAN, 1.0);
    assert!(integrate_with_events(&ode, nan, &no_events(), 1.0, 1e-9, &[]).is_err());
    let singular = FnOde {
        weight: 1.0,
        r_start: 1e-3,
        source: |_: f64, y: f64| -y,
    };
    assert!(integrate_with_events(
        &singular,
        State::new(1e-4, 1.0, 0.0),
        &no_events(),
        1.0,
        1e-9,
        &[]
    )
    .is_err());
}

#[test]
fn start_inside_event_region_terminates_immediately() {
    let ode = linear(0.0, |_, y| -y);
    let events = EventSpec {
        floor: Some(0.0),
        ..no_events()
    };
    let tr =
        integrate_with_events(&ode, State::new(0.0, -1.0, 1.0), &events, 1.0, 1e-9, &[]).unwrap();
    assert_eq!(
        tr.termination,
        Termination::Event {
            kind: EventKind::Floor,
            radius: 0.0
        }
    );
    assert_eq!(tr.steps, 0);
}

#[test]
fn comparison_zero_scales_with_mu() {
    let z1 = comparison_zero(1.0, 1e-12).unwrap();
    assert!((z1 - j0_zero_by_scan()).abs() < 1e-5);
    let z4 = comparison_zero(4.0, 1e-12).unwrap();
    assert!((z4 - 0.5 * z1).abs() < 1e-8);
    assert!(comparison_zero(-1.0, 1e-12).is_err());
}
