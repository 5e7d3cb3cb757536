//! Radial ODE integration from a series start with event detection.
//!
//! Every profile equation has the form `y'' = -w y'/r + S(r, y)` with
//! `w = -1` for the gauge field and `w = +1` for the two scalars. Coefficient
//! profiles are frozen interpolants for the duration of one shot.

mod equations;
mod rk;
mod series;

pub use equations::{CondensateEquation, FnOde, GaugeEquation, HiggsEquation};
pub use rk::{step_rk, StepResult};
pub use series::{
    series_start_a, series_start_a_massive, series_start_a_refined, series_start_f,
    series_start_f_refined, series_start_g, series_start_g_refined,
};

use crate::error::{Result, VortexError};

/// Default divergence guard.
pub const ESCAPE_BOUND: f64 = 1e3;

/// Second-order radial equation with a `1/r` friction term.
pub trait RadialOde: Sync {
    /// Coefficient `w` of the `-w y'/r` term.
    fn singular_weight(&self) -> f64;

    /// Regular part `S(r, y)` of `y''`.
    fn source(&self, r: f64, y: f64) -> f64;

    /// Smallest radius at which the right-hand side may be evaluated.
    fn r_start(&self) -> f64 {
        0.0
    }

    #[inline]
    fn accel(&self, r: f64, y: f64, yp: f64) -> f64 {
        let w = self.singular_weight();
        let friction = if w == 0.0 {
            0.0
        } else {
            debug_assert!(r >= self.r_start() && r > 0.0, "singular term at r = {r}");
            -w * yp / r
        };
        friction + self.source(r, y)
    }
}

/// Point `(r, y, y')` on a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub r: f64,
    pub y: f64,
    pub yp: f64,
}

impl State {
    pub fn new(r: f64, y: f64, yp: f64) -> Self {
        Self { r, y, yp }
    }

    fn is_finite(&self) -> bool {
        self.r.is_finite() && self.y.is_finite() && self.yp.is_finite()
    }
}

/// Sign condition on `y'` that terminates a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeEvent {
    /// `y'` drops below zero.
    TurnsNegative,
    /// `y'` climbs back to zero or above.
    TurnsNonnegative,
    None,
}

/// Termination conditions for one shot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventSpec {
    /// Upward crossing of this value terminates.
    pub ceiling: Option<f64>,
    /// Downward crossing of this value terminates.
    pub floor: Option<f64>,
    pub slope: SlopeEvent,
    /// `|y|` beyond this aborts the trajectory as divergent.
    pub escape_bound: f64,
}

impl EventSpec {
    fn validate(&self) -> Result<()> {
        if let (Some(lo), Some(hi)) = (self.floor, self.ceiling) {
            if !(lo < hi) {
                return Err(VortexError::InvalidArgument(format!(
                    "floor {lo} must lie below ceiling {hi}"
                )));
            }
        }
        let top = self
            .ceiling
            .unwrap_or(f64::NEG_INFINITY)
            .max(self.floor.map_or(f64::NEG_INFINITY, f64::abs));
        if !(self.escape_bound > top) || !(self.escape_bound > 0.0) {
            return Err(VortexError::InvalidArgument(format!(
                "escape bound {} must exceed the event levels",
                self.escape_bound
            )));
        }
        Ok(())
    }
}

/// Which condition stopped a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Ceiling,
    Floor,
    Slope,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Event { kind: EventKind, radius: f64 },
    ReachedEnd { radius: f64 },
    Diverged { radius: f64 },
}

impl Termination {
    pub fn radius(&self) -> f64 {
        match *self {
            Termination::Event { radius, .. }
            | Termination::ReachedEnd { radius }
            | Termination::Diverged { radius } => radius,
        }
    }
}

/// Trajectory sampled at the mesh nodes it passed through.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Mesh index of `values[0]`.
    pub first_node: usize,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
    pub termination: Termination,
    /// State at the termination radius.
    pub end: State,
    pub steps: usize,
}

impl Trajectory {
    /// One past the last mesh index that was sampled.
    pub fn end_node(&self) -> usize {
        self.first_node + self.values.len()
    }

    pub fn value_at_node(&self, node: usize) -> Option<f64> {
        node.checked_sub(self.first_node)
            .and_then(|k| self.values.get(k).copied())
    }
}

const SAFETY: f64 = 0.9;
const PI_ALPHA: f64 = 0.7 / 5.0;
const PI_BETA: f64 = 0.4 / 5.0;
const MAX_GROWTH: f64 = 5.0;
const MIN_SHRINK: f64 = 0.2;
const MAX_STEP: f64 = 0.5;
const MAX_STEPS: usize = 2_000_000;
const EVENT_BISECTIONS: usize = 60;

/// First zero of the regular solution of `h'' + h'/r + μ h = 0` with
/// `h(0) = 1`, located by the floor event of the integrator.
pub fn comparison_zero(mu: f64, tol: f64) -> Result<f64> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(VortexError::InvalidArgument(format!(
            "mu must be positive, got {mu}"
        )));
    }
    let r0 = 1e-3 / mu.sqrt();
    let ode = FnOde {
        weight: 1.0,
        r_start: r0,
        source: move |_: f64, y: f64| -mu * y,
    };
    let init = State::new(r0, 1.0 - 0.25 * mu * r0 * r0, -0.5 * mu * r0);
    let events = EventSpec {
        ceiling: None,
        floor: Some(0.0),
        slope: SlopeEvent::None,
        escape_bound: ESCAPE_BOUND,
    };
    let tr = integrate_with_events(&ode, init, &events, 4.0 / mu.sqrt(), tol, &[])?;
    match tr.termination {
        Termination::Event {
            kind: EventKind::Floor,
            radius,
        } => Ok(radius),
        other => Err(VortexError::InvalidArgument(format!(
            "comparison solution did not cross zero: {other:?}"
        ))),
    }
}

/// Adaptive integration from `init` towards `r_end`, stopping at the first
/// event. `nodes` is the mesh the trajectory is sampled on.
pub fn integrate_with_events<O: RadialOde + ?Sized>(
    ode: &O,
    init: State,
    events: &EventSpec,
    r_end: f64,
    tol: f64,
    nodes: &[f64],
) -> Result<Trajectory> {
    if !init.is_finite() {
        return Err(VortexError::NonFinite { r: init.r });
    }
    if !(tol > 1e-14 && tol < 1e-4) {
        return Err(VortexError::InvalidArgument(format!(
            "tolerance {tol} outside (1e-14, 1e-4)"
        )));
    }
    if !(r_end > init.r) {
        return Err(VortexError::InvalidArgument(format!(
            "end radius {r_end} must exceed start {}",
            init.r
        )));
    }
    if ode.singular_weight() != 0.0 && init.r < ode.r_start() {
        return Err(VortexError::InvalidArgument(format!(
            "start {} below the series start {}",
            init.r,
            ode.r_start()
        )));
    }
    events.validate()?;
    let locate_tol = 1e-10 * r_end;

    let first_node = nodes.partition_point(|&x| x < init.r);
    let mut next_node = first_node;
    let mut values = Vec::new();
    let mut slopes = Vec::new();
    if nodes.get(first_node) == Some(&init.r) {
        values.push(init.y);
        slopes.push(init.yp);
        next_node += 1;
    }

    let finish = |values, slopes, termination, end, steps| Trajectory {
        first_node,
        values,
        slopes,
        termination,
        end,
        steps,
    };

    // conditions already violated at the start
    if let Some(kind) = initial_event(events, init) {
        return Ok(finish(
            values,
            slopes,
            Termination::Event {
                kind,
                radius: init.r,
            },
            init,
            0,
        ));
    }

    let mut state = init;
    let mut k1 = rk::deriv(ode, state.r, [state.y, state.yp]);
    let mut h = if init.r > 0.0 { 0.1 * init.r } else { 1e-3 };
    h = h.min(r_end - init.r).min(MAX_STEP);
    let mut err_prev: f64 = 1e-4;
    let mut steps = 0;

    loop {
        if steps >= MAX_STEPS {
            return Err(VortexError::InvalidArgument(format!(
                "step budget exhausted at r = {}",
                state.r
            )));
        }
        let last = state.r + h >= r_end;
        if last {
            h = r_end - state.r;
        }
        let (step, k7) = rk::dp5(ode, state, k1, h);
        let new = step.state;
        let err = error_norm(&step.error, state, new, tol);
        if !err.is_finite() || !new.is_finite() {
            h *= MIN_SHRINK;
            if h < 1e-14 * (1.0 + state.r) {
                return Err(VortexError::NonFinite { r: state.r });
            }
            continue;
        }
        if err > 1.0 {
            h *= (SAFETY * err.powf(-PI_ALPHA)).max(MIN_SHRINK);
            if h < 1e-14 * (1.0 + state.r) {
                return Err(VortexError::NonFinite { r: state.r });
            }
            continue;
        }
        steps += 1;

        // events inside the accepted step
        if let Some((kind, r_ev)) = locate_event(events, &step, state, locate_tol) {
            let at = step.dense.at(r_ev);
            let end = State::new(r_ev, at[0], at[1]);
            sample_nodes(nodes, &mut next_node, r_ev, &step, &mut values, &mut slopes);
            let termination = Termination::Event { kind, radius: r_ev };
            return Ok(finish(values, slopes, termination, end, steps));
        }
        sample_nodes(
            nodes,
            &mut next_node,
            new.r,
            &step,
            &mut values,
            &mut slopes,
        );

        if new.y.abs() > events.escape_bound {
            let termination = Termination::Diverged { radius: new.r };
            return Ok(finish(values, slopes, termination, new, steps));
        }
        if last {
            let end = State::new(r_end, new.y, new.yp);
            let termination = Termination::ReachedEnd { radius: r_end };
            return Ok(finish(values, slopes, termination, end, steps));
        }

        let factor = SAFETY * err.max(1e-10).powf(-PI_ALPHA) * err_prev.powf(PI_BETA);
        h *= factor.clamp(MIN_SHRINK, MAX_GROWTH);
        h = h.min(MAX_STEP);
        err_prev = err.max(1e-4);
        state = new;
        k1 = k7;
    }
}

/// RMS error scaled by `tol (1 + |y|)` per component.
fn error_norm(error: &[f64; 2], old: State, new: State, tol: f64) -> f64 {
    let s0 = tol * (1.0 + old.y.abs().max(new.y.abs()));
    let s1 = tol * (1.0 + old.yp.abs().max(new.yp.abs()));
    (0.5 * ((error[0] / s0).powi(2) + (error[1] / s1).powi(2))).sqrt()
}

fn initial_event(events: &EventSpec, s: State) -> Option<EventKind> {
    if events.floor.is_some_and(|lo| s.y <= lo) {
        return Some(EventKind::Floor);
    }
    if events.ceiling.is_some_and(|hi| s.y >= hi) {
        return Some(EventKind::Ceiling);
    }
    match events.slope {
        SlopeEvent::TurnsNegative if s.yp < 0.0 => Some(EventKind::Slope),
        SlopeEvent::TurnsNonnegative if s.yp >= 0.0 => Some(EventKind::Slope),
        _ => None,
    }
}

fn sample_nodes(
    nodes: &[f64],
    next: &mut usize,
    upto: f64,
    step: &StepResult,
    values: &mut Vec<f64>,
    slopes: &mut Vec<f64>,
) {
    while *next < nodes.len() && nodes[*next] <= upto {
        let v = step.dense.at(nodes[*next]);
        values.push(v[0]);
        slopes.push(v[1]);
        *next += 1;
    }
}

/// Earliest event in the step; value crossings win exact ties.
fn locate_event(
    events: &EventSpec,
    step: &StepResult,
    old: State,
    locate_tol: f64,
) -> Option<(EventKind, f64)> {
    let new = step.state;
    let mut found: Option<(EventKind, f64)> = None;
    let mut consider = |kind: EventKind, r: f64| match found {
        Some((_, best)) if best < r => {}
        Some((prev, best)) if best == r && prev != EventKind::Slope => {}
        _ => found = Some((kind, r)),
    };

    if let Some(lo) = events.floor {
        if old.y > lo && new.y <= lo {
            let r = bisect_crossing(step, old.r, new.r, locate_tol, |v| v[0] <= lo);
            consider(EventKind::Floor, r);
        }
    }
    if let Some(hi) = events.ceiling {
        if old.y < hi && new.y >= hi {
            let r = bisect_crossing(step, old.r, new.r, locate_tol, |v| v[0] >= hi);
            consider(EventKind::Ceiling, r);
        }
    }
    match events.slope {
        SlopeEvent::TurnsNegative if old.yp >= 0.0 && new.yp < 0.0 => {
            let r = bisect_crossing(step, old.r, new.r, locate_tol, |v| v[1] < 0.0);
            consider(EventKind::Slope, r);
        }
        SlopeEvent::TurnsNonnegative if old.yp < 0.0 && new.yp >= 0.0 => {
            let r = bisect_crossing(step, old.r, new.r, locate_tol, |v| v[1] >= 0.0);
            consider(EventKind::Slope, r);
        }
        _ => {}
    }
    found
}

/// First radius in `(lo, hi]` where `fired` holds on the dense output.
fn bisect_crossing(
    step: &StepResult,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    fired: impl Fn([f64; 2]) -> bool,
) -> f64 {
    for _ in 0..EVENT_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if fired(step.dense.at(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests;
