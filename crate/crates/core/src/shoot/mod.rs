//! Bisection shooting for the gauge, condensate and Higgs equations.
//!
//! Each equation has one free parameter at the origin (`B`, `λ`, `D`). A shot
//! integrates outwards past `r_max` and is classified by the first event it
//! hits: a value crossing means overshoot, a turning slope means undershoot.
//! Bisection narrows the bracket to floating-point resolution and the
//! profile is reconstructed from the last undershoot/overshoot pair.

mod blend;

use std::sync::Arc;

use crate::error::{Result, Stage, VortexError};
use crate::grid::RadialGrid;
use crate::integrate::{
    integrate_with_events, series_start_a, series_start_a_massive, series_start_a_refined,
    series_start_f_refined, series_start_g_refined, CondensateEquation, EventKind, EventSpec,
    GaugeEquation, HiggsEquation, SlopeEvent, State, Termination, Trajectory, ESCAPE_BOUND,
};
use crate::outcome::{Classification, CondensateBranch, ShootingOutcome};
use crate::params::ModelParams;
use crate::profile::{Profile, ProfileKind};

/// Maximum number of decade widenings of a default bracket.
pub const MAX_WIDENINGS: usize = 6;

/// Settings shared by the three shooting problems.
#[derive(Debug, Clone, PartialEq)]
pub struct ShootConfig {
    /// Starting bracket; `None` uses the equation's default bracket. A
    /// bracket that fails to straddle the solution falls back to the default.
    pub bracket: Option<(f64, f64)>,
    /// Relative bracket width at which bisection stops.
    pub param_tol: f64,
    pub max_bisections: usize,
    pub integration_tol: f64,
    /// Far-field acceptance at `r_max`.
    pub eps_bc: f64,
    /// Shots are integrated to `horizon_factor * r_max` with coefficients
    /// frozen at their `r_max` values, so that nearly exact shots still
    /// classify.
    pub horizon_factor: f64,
}

impl Default for ShootConfig {
    fn default() -> Self {
        Self {
            bracket: None,
            param_tol: 1e-10,
            max_bisections: 200,
            integration_tol: 1e-13,
            eps_bc: 1e-3,
            horizon_factor: 4.0,
        }
    }
}

impl ShootConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(VortexError::InvalidArgument(msg));
        if !(self.param_tol > 0.0 && self.param_tol < 1.0) {
            return bad(format!("param_tol {} outside (0, 1)", self.param_tol));
        }
        if self.max_bisections == 0 || self.max_bisections > 200 {
            return bad(format!(
                "max_bisections {} outside 1..=200",
                self.max_bisections
            ));
        }
        if !(self.integration_tol > 1e-14 && self.integration_tol < 1e-4) {
            return bad(format!(
                "integration_tol {} outside (1e-14, 1e-4)",
                self.integration_tol
            ));
        }
        if !(self.eps_bc > 0.0 && self.eps_bc < 0.5) {
            return bad(format!("eps_bc {} outside (0, 0.5)", self.eps_bc));
        }
        if !(self.horizon_factor >= 1.0 && self.horizon_factor.is_finite()) {
            return bad(format!("horizon_factor {} below 1", self.horizon_factor));
        }
        if let Some((lo, hi)) = self.bracket {
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return bad(format!("bracket [{lo}, {hi}] must satisfy 0 < lo < hi"));
            }
        }
        Ok(())
    }

    /// Copy with a different starting bracket.
    pub fn with_bracket(&self, bracket: Option<(f64, f64)>) -> Self {
        Self {
            bracket,
            ..self.clone()
        }
    }
}

/// Record of one bisection search.
#[derive(Debug, Clone)]
pub struct Bisection {
    pub under: Option<ShootingOutcome>,
    pub over: Option<ShootingOutcome>,
    /// Set when a shot met the far-field condition directly.
    pub converged: Option<ShootingOutcome>,
    /// Every evaluated parameter in evaluation order.
    pub history: Vec<(f64, Classification)>,
}

impl Bisection {
    /// Converged parameter, or the midpoint of the final bracket.
    pub fn parameter(&self) -> f64 {
        match (&self.converged, &self.under, &self.over) {
            (Some(c), _, _) => c.parameter,
            (None, Some(u), Some(o)) => 0.5 * (u.parameter + o.parameter),
            (None, Some(u), None) => u.parameter,
            (None, None, Some(o)) => o.parameter,
            (None, None, None) => f64::NAN,
        }
    }

    /// `(under, over)` parameters of the final bracket.
    pub fn bracket(&self) -> (f64, f64) {
        let p = self.parameter();
        (
            self.under.as_ref().map_or(p, |u| u.parameter),
            self.over.as_ref().map_or(p, |o| o.parameter),
        )
    }
}

/// Bisect between `lo` and `hi`, which must classify as one undershoot and
/// one overshoot. `shot` integrates and classifies a single parameter.
pub fn bisect<F>(shot: F, lo: f64, hi: f64, cfg: &ShootConfig) -> Result<Bisection>
where
    F: Fn(f64) -> Result<ShootingOutcome>,
{
    cfg.validate()?;
    let a = shot(lo)?;
    let b = shot(hi)?;
    let history = vec![(lo, a.classification), (hi, b.classification)];
    bisect_between(&shot, a, b, cfg, history)
}

fn bisect_between<F>(
    shot: &F,
    a: ShootingOutcome,
    b: ShootingOutcome,
    cfg: &ShootConfig,
    mut history: Vec<(f64, Classification)>,
) -> Result<Bisection>
where
    F: Fn(f64) -> Result<ShootingOutcome>,
{
    use Classification::*;
    for o in [&a, &b] {
        check_not_diverged(o)?;
    }
    let converged = |c: ShootingOutcome, history| {
        Ok(Bisection {
            under: None,
            over: None,
            converged: Some(c),
            history,
        })
    };
    let (mut under, mut over) = match (a.classification, b.classification) {
        (Converged, _) => return converged(a, history),
        (_, Converged) => return converged(b, history),
        (Under, Over) => (a, b),
        (Over, Under) => (b, a),
        (lo_class, hi_class) => {
            return Err(VortexError::BracketFailure {
                stage: Stage::Gauge,
                lo: a.parameter,
                hi: b.parameter,
                lo_class,
                hi_class,
            })
        }
    };

    for _ in 0..cfg.max_bisections {
        let (lo, hi) = ordered(under.parameter, over.parameter);
        let mid = if lo > 0.0 && hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            lo + 0.5 * (hi - lo)
        };
        if hi - lo <= cfg.param_tol * mid.abs() || mid <= lo || mid >= hi {
            return Ok(Bisection {
                under: Some(under),
                over: Some(over),
                converged: None,
                history,
            });
        }
        let out = shot(mid)?;
        history.push((mid, out.classification));
        match out.classification {
            Under => under = out,
            Over => over = out,
            Converged => return converged(out, history),
            Diverged => {
                check_not_diverged(&out)?;
            }
        }
    }
    let (lo, hi) = ordered(under.parameter, over.parameter);
    Err(VortexError::BisectionExhausted {
        iterations: cfg.max_bisections,
        width: hi - lo,
    })
}

fn ordered(x: f64, y: f64) -> (f64, f64) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

fn check_not_diverged(o: &ShootingOutcome) -> Result<()> {
    if o.classification == Classification::Diverged {
        return Err(VortexError::Diverged {
            stage: Stage::Gauge,
            parameter: o.parameter,
            radius: o.termination_radius,
        });
    }
    Ok(())
}

/// Classification shared by all three equations: value crossings overshoot,
/// turning slopes undershoot, and an event-free run is accepted when the
/// value at `r_max` satisfies `far_ok`.
fn classify(
    traj: &Trajectory,
    grid: &RadialGrid,
    far_ok: impl Fn(f64) -> bool,
) -> Result<Classification> {
    match traj.termination {
        Termination::Event {
            kind: EventKind::Floor | EventKind::Ceiling,
            ..
        } => Ok(Classification::Over),
        Termination::Event {
            kind: EventKind::Slope,
            ..
        } => Ok(Classification::Under),
        Termination::Diverged { .. } => Ok(Classification::Diverged),
        Termination::ReachedEnd { radius } => {
            let far = traj.value_at_node(grid.len() - 1);
            match far {
                Some(v) if far_ok(v) => Ok(Classification::Converged),
                _ => Err(VortexError::Unresolved {
                    stage: Stage::Gauge,
                    reason: format!(
                        "no event by r = {radius} and far-field value {far:?} not accepted; \
                         increase r_max"
                    ),
                }),
            }
        }
    }
}

/// Classify a gauge trajectory (integrated in `a = 1 - ã`).
pub fn classify_a(traj: &Trajectory, grid: &RadialGrid, eps_bc: f64) -> Result<Classification> {
    classify(traj, grid, |a| (0.0..=eps_bc).contains(&a)).map_err(|e| e.in_stage(Stage::Gauge))
}

/// Classify a condensate trajectory started at `g(0) = lambda`.
pub fn classify_g(
    traj: &Trajectory,
    grid: &RadialGrid,
    eps_bc: f64,
    lambda: f64,
) -> Result<Classification> {
    classify(traj, grid, |g| (0.0..=eps_bc * lambda).contains(&g))
        .map_err(|e| e.in_stage(Stage::Condensate))
}

/// Classify a Higgs trajectory.
pub fn classify_f(traj: &Trajectory, grid: &RadialGrid, eps_bc: f64) -> Result<Classification> {
    classify(traj, grid, |f| f >= 1.0 - eps_bc && f < 1.0).map_err(|e| e.in_stage(Stage::Higgs))
}

/// Events for the gauge and condensate shots: reaching zero overshoots, a
/// slope turning back up undershoots.
pub const DECAY_EVENTS: EventSpec = EventSpec {
    ceiling: None,
    floor: Some(0.0),
    slope: SlopeEvent::TurnsNonnegative,
    escape_bound: ESCAPE_BOUND,
};

/// Events for the Higgs shot: reaching one overshoots, a slope turning
/// negative undershoots.
pub const RISE_EVENTS: EventSpec = EventSpec {
    ceiling: Some(1.0),
    floor: None,
    slope: SlopeEvent::TurnsNegative,
    escape_bound: ESCAPE_BOUND,
};

/// Converged shot with diagnostics.
#[derive(Debug, Clone)]
pub struct ShotResult {
    pub profile: Profile,
    pub parameter: f64,
    /// Final `(under, over)` parameters; both equal `parameter` for a shot
    /// that converged directly.
    pub bracket: (f64, f64),
    pub history: Vec<(f64, Classification)>,
    /// Radius beyond which the profile is the fitted exponential tail.
    pub trust_radius: f64,
}

impl ShotResult {
    fn zero(grid: Arc<RadialGrid>, kind: ProfileKind) -> Self {
        let r_max = grid.r_max();
        Self {
            profile: Profile::zeros(grid, kind),
            parameter: 0.0,
            bracket: (0.0, 0.0),
            history: Vec::new(),
            trust_radius: r_max,
        }
    }
}

fn outcome(
    parameter: f64,
    classification: Classification,
    trajectory: Trajectory,
    r_max: f64,
) -> ShootingOutcome {
    let termination_radius = match classification {
        Classification::Converged => r_max,
        _ => trajectory.termination.radius(),
    };
    ShootingOutcome {
        parameter,
        classification,
        trajectory,
        termination_radius,
    }
}

/// `M₁ = max f(r)/r` over `0 < r ≤ 1`.
pub fn measure_m1(f: &Profile) -> f64 {
    near_origin_max(f, |r, v| v / r)
}

/// `M₂ = max (1 - a(r))/r²` over `0 < r ≤ 1`.
pub fn measure_m2(a: &Profile) -> f64 {
    near_origin_max(a, |r, v| (1.0 - v) / (r * r))
}

fn near_origin_max(p: &Profile, q: impl Fn(f64, f64) -> f64) -> f64 {
    p.grid()
        .nodes()
        .iter()
        .zip(p.values())
        .skip(1)
        .take_while(|(&r, _)| r <= 1.0)
        .map(|(&r, &v)| q(r, v))
        .fold(0.0, f64::max)
}

fn same_grid(a: &Profile, b: &Profile) -> Result<()> {
    if Arc::ptr_eq(a.grid(), b.grid()) || a.grid().nodes() == b.grid().nodes() {
        Ok(())
    } else {
        Err(VortexError::InvalidArgument(
            "coefficient profiles live on different grids".into(),
        ))
    }
}

/// Default bracket, widening rules and expected low-end classification.
struct Search {
    default: (f64, f64),
    low_class: Classification,
    widen_lo: fn(f64, f64) -> f64,
    widen_hi: fn(f64, f64) -> f64,
    /// Extra argument for the widening rules (the cap for `λ`).
    scale: f64,
}

fn run_search<F>(shot: F, search: &Search, cfg: &ShootConfig) -> Result<Bisection>
where
    F: Fn(f64) -> Result<ShootingOutcome>,
{
    cfg.validate()?;
    let mut history = Vec::new();
    if let Some((lo, hi)) = cfg.bracket {
        let a = shot(lo)?;
        let b = shot(hi)?;
        history.push((lo, a.classification));
        history.push((hi, b.classification));
        let straddles = matches!(
            (a.classification, b.classification),
            (Classification::Under, Classification::Over)
                | (Classification::Over, Classification::Under)
        );
        if straddles {
            return bisect_between(&shot, a, b, cfg, history);
        }
    }

    let high_class = match search.low_class {
        Classification::Under => Classification::Over,
        _ => Classification::Under,
    };
    let (mut lo, mut hi) = search.default;
    let mut a = shot(lo)?;
    history.push((lo, a.classification));
    for _ in 0..MAX_WIDENINGS {
        if a.classification == search.low_class || a.classification == Classification::Converged {
            break;
        }
        lo = (search.widen_lo)(lo, search.scale);
        a = shot(lo)?;
        history.push((lo, a.classification));
    }
    let mut b = shot(hi)?;
    history.push((hi, b.classification));
    for _ in 0..MAX_WIDENINGS {
        if b.classification == high_class || b.classification == Classification::Converged {
            break;
        }
        hi = (search.widen_hi)(hi, search.scale);
        b = shot(hi)?;
        history.push((hi, b.classification));
    }
    bisect_between(&shot, a, b, cfg, history)
}

fn decade_down(x: f64, _: f64) -> f64 {
    x / 10.0
}

fn decade_up(x: f64, _: f64) -> f64 {
    x * 10.0
}

fn towards_cap(x: f64, cap: f64) -> f64 {
    cap - (cap - x) / 10.0
}

/// Relative agreement of an undershoot/overshoot pair up to which their
/// midpoint is taken as the profile.
const MARCH_TIGHT: f64 = 1e-8;
/// Field size (in units of the far-field scale) below which the profile is
/// finished by the blended pair and its exponential tail instead of a
/// further restart.
const MARCH_FLOOR: f64 = 1e-9;
const MAX_RESTARTS: usize = 64;
/// Radial width over which a restarted trajectory is blended into the
/// profile it replaces.
const SPLICE_WIDTH: f64 = 1.0;
/// Slope bracket widenings tried at a restart.
const RESTART_WIDENINGS: usize = 24;

/// Integrate and classify from an arbitrary state on the mesh.
type Restart<'a> = dyn Fn(State) -> Result<(Trajectory, Classification)> + 'a;

/// Assemble the profile from a finished search.
///
/// Bisection in the central parameter resolves the profile only until the
/// growing far-field mode seeded by the final bracket width becomes
/// visible. From there the shot is restarted with the value held fixed and
/// the slope bisected again, which carries the resolved region outwards
/// until the field is negligible; the remainder comes from the blended pair
/// and its exponential tail. Each restart is taken up to `SPLICE_WIDTH`
/// before the last resolved node and faded in smoothly, so the small slope
/// mismatch at the junction does not show up as a kink.
fn finish(
    bis: Bisection,
    grid: &Arc<RadialGrid>,
    kind: ProfileKind,
    center: f64,
    far_scale: f64,
    cfg: &ShootConfig,
    restart: &Restart,
) -> Result<ShotResult> {
    let parameter = bis.parameter();
    let bracket = bis.bracket();
    let n = grid.len();
    let nodes = grid.nodes();
    let mut values = Vec::with_capacity(n);
    values.push(center);

    let take_all = |values: &mut Vec<f64>, t: &Trajectory| {
        values.extend(t.values.iter().take(n - t.first_node).copied());
    };
    let mut trust_radius = grid.r_max();
    let (mut under, mut over) = match (bis.converged, bis.under, bis.over) {
        (Some(c), _, _) => {
            take_all(&mut values, &c.trajectory);
            (None, None)
        }
        (None, Some(u), Some(o)) => (Some(u.trajectory), Some(o.trajectory)),
        _ => unreachable!("bisection ends converged or with both sides"),
    };

    let mut restarts = 0;
    // (first node, old values) of every splice window
    let mut splices: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut splice_end = 0;
    while let (Some(u), Some(o)) = (under.take(), over.take()) {
        let k0 = u.first_node;
        let common = u.end_node().min(o.end_node()).min(n);
        let mid = |k: usize| 0.5 * (u.values[k - k0] + o.values[k - k0]);
        let mut k_t = None;
        for k in k0..common {
            let sep = (o.values[k - k0] - u.values[k - k0]).abs();
            if !(sep <= MARCH_TIGHT * blend::distance(kind, mid(k), 0.0).0.abs()) {
                break;
            }
            k_t = Some(k);
        }
        if k_t == Some(n - 1) {
            values.extend((k0..n).map(mid));
            break;
        }
        let next = match k_t {
            Some(k)
                if k > k0 + 1
                    && restarts < MAX_RESTARTS
                    && blend::distance(kind, mid(k), 0.0).0 > MARCH_FLOOR * far_scale =>
            {
                let ks = nodes
                    .partition_point(|&r| r < nodes[k] - SPLICE_WIDTH)
                    .max(k0 + 1)
                    .max(splice_end)
                    .min(k);
                let slope = 0.5 * (u.slopes[ks - k0] + o.slopes[ks - k0]);
                let spread = (o.slopes[ks - k0] - u.slopes[ks - k0]).abs();
                restart_pair(restart, State::new(nodes[ks], mid(ks), slope), spread, cfg)?
                    .map(|pair| (ks, k, pair))
            }
            _ => None,
        };
        match next {
            Some((ks, k, pair)) => {
                restarts += 1;
                values.extend((k0..ks).map(mid));
                if k > ks {
                    splices.push((ks, (ks..=k).map(mid).collect()));
                    splice_end = k + 1;
                }
                match pair {
                    RestartPair::Converged(t) => take_all(&mut values, &t),
                    RestartPair::Bracket(nu, no) => {
                        under = Some(nu);
                        over = Some(no);
                    }
                }
            }
            None => {
                let b = blend::combine(&u, &o, nodes, kind, far_scale, cfg.eps_bc)?;
                values.extend(b.values);
                trust_radius = b.trust_radius;
            }
        }
    }

    if values.len() != n {
        return Err(VortexError::Unresolved {
            stage: Stage::Gauge,
            reason: format!("trajectory covers {} of {n} nodes", values.len()),
        });
    }
    for (ks, old) in splices {
        apply_splice(
            &mut values[ks..ks + old.len()],
            &old,
            &nodes[ks..ks + old.len()],
        );
    }
    Ok(ShotResult {
        profile: Profile::new(grid.clone(), values, kind)?,
        parameter,
        bracket,
        history: bis.history,
        trust_radius,
    })
}

/// Fade from `old` to the current `values` with a smoothstep weight that
/// has zero slope at both ends of the window.
fn apply_splice(values: &mut [f64], old: &[f64], r: &[f64]) {
    let (r0, r1) = (r[0], r[r.len() - 1]);
    for ((v, &o), &x) in values.iter_mut().zip(old).zip(r) {
        let t = (x - r0) / (r1 - r0);
        let w = t * t * (3.0 - 2.0 * t);
        *v = (1.0 - w) * o + w * *v;
    }
}

enum RestartPair {
    Converged(Trajectory),
    Bracket(Trajectory, Trajectory),
}

/// Bisect the slope at a fixed state value. `None` when no straddling
/// slope bracket is found, in which case the caller keeps its current pair.
fn restart_pair(
    restart: &Restart,
    at: State,
    spread: f64,
    cfg: &ShootConfig,
) -> Result<Option<RestartPair>> {
    let shot = |s: f64| -> Result<ShootingOutcome> {
        let (trajectory, classification) = restart(State::new(at.r, at.y, s))?;
        let termination_radius = trajectory.termination.radius();
        Ok(ShootingOutcome {
            parameter: s,
            classification,
            trajectory,
            termination_radius,
        })
    };
    let mut half = spread.max(1e-13 * at.yp.abs()).max(f64::MIN_POSITIVE);
    for _ in 0..RESTART_WIDENINGS {
        let lo = shot(at.yp - half)?;
        let hi = shot(at.yp + half)?;
        let straddles = matches!(
            (lo.classification, hi.classification),
            (Classification::Under, Classification::Over)
                | (Classification::Over, Classification::Under)
        );
        if straddles
            || lo.classification == Classification::Converged
            || hi.classification == Classification::Converged
        {
            let history = vec![
                (lo.parameter, lo.classification),
                (hi.parameter, hi.classification),
            ];
            let bis = bisect_between(&shot, lo, hi, cfg, history)?;
            return Ok(Some(match (bis.converged, bis.under, bis.over) {
                (Some(c), _, _) => RestartPair::Converged(c.trajectory),
                (None, Some(u), Some(o)) => RestartPair::Bracket(u.trajectory, o.trajectory),
                _ => unreachable!("bisection ends converged or with both sides"),
            }));
        }
        half *= 4.0;
    }
    Ok(None)
}

fn run_events(
    ode: &dyn crate::integrate::RadialOde,
    init: State,
    events: &EventSpec,
    grid: &RadialGrid,
    cfg: &ShootConfig,
) -> Result<Trajectory> {
    integrate_with_events(
        ode,
        init,
        events,
        cfg.horizon_factor * grid.r_max(),
        cfg.integration_tol,
        grid.nodes(),
    )
}

/// One gauge shot with parameter `B`.
pub fn shot_a(b: f64, f: &Profile, beta: f64, cfg: &ShootConfig) -> Result<ShootingOutcome> {
    let grid = f.grid();
    let r0 = grid.r_start();
    let f0 = f.values()[0];
    let (at, atp) = if f0 == 0.0 {
        series_start_a_refined(b, f, beta, r0)?
    } else if f0 > 0.0 {
        series_start_a_massive(b, beta * f0, r0)?
    } else {
        series_start_a(b, r0)?
    };
    let ode = GaugeEquation {
        beta,
        f,
        r_start: r0,
    };
    let init = State::new(r0, 1.0 - at, -atp);
    let traj = integrate_with_events(
        &ode,
        init,
        &DECAY_EVENTS,
        cfg.horizon_factor * grid.r_max(),
        cfg.integration_tol,
        grid.nodes(),
    )?;
    let class = classify_a(&traj, grid, cfg.eps_bc)?;
    Ok(outcome(b, class, traj, grid.r_max()))
}

/// Solve the gauge equation for frozen `f`.
pub fn shoot_a(f: &Profile, beta: f64, cfg: &ShootConfig) -> Result<ShotResult> {
    crate::error::check_finite("beta", beta)?;
    if beta <= 0.0 {
        return Err(VortexError::InvalidArgument(format!(
            "beta must be positive, got {beta}"
        )));
    }
    let search = Search {
        default: (1e-4, 1e3 * beta.powi(2).max(1.0)),
        low_class: Classification::Under,
        widen_lo: decade_down,
        widen_hi: decade_up,
        scale: 0.0,
    };
    let run = || -> Result<ShotResult> {
        let bis = run_search(|b| shot_a(b, f, beta, cfg), &search, cfg)?;
        let ode = GaugeEquation {
            beta,
            f,
            r_start: f.grid().r_start(),
        };
        let restart = |init: State| {
            let traj = run_events(&ode, init, &DECAY_EVENTS, f.grid(), cfg)?;
            let class = classify_a(&traj, f.grid(), cfg.eps_bc)?;
            Ok((traj, class))
        };
        finish(bis, f.grid(), ProfileKind::GaugeA, 1.0, 1.0, cfg, &restart)
    };
    run().map_err(|e| e.in_stage(Stage::Gauge))
}

/// One condensate shot with central value `lambda`.
pub fn shot_g(
    lambda: f64,
    f: &Profile,
    params: &ModelParams,
    cfg: &ShootConfig,
) -> Result<ShootingOutcome> {
    let grid = f.grid();
    let r0 = grid.r_start();
    let (g, gp) = series_start_g_refined(lambda, params, f, r0)?;
    let ode = CondensateEquation {
        params: *params,
        f,
        r_start: r0,
    };
    let traj = integrate_with_events(
        &ode,
        State::new(r0, g, gp),
        &DECAY_EVENTS,
        cfg.horizon_factor * grid.r_max(),
        cfg.integration_tol,
        grid.nodes(),
    )?;
    let class = classify_g(&traj, grid, cfg.eps_bc, lambda)?;
    Ok(outcome(lambda, class, traj, grid.r_max()))
}

/// Solve the condensate equation for frozen `f`.
///
/// Returns `g ≡ 0` without integrating when `alpha ≥ alpha_crit`, when the
/// cap `√(1 - 2α²)` is below `10 · param_tol`, and when even the smallest
/// central value undershoots, i.e. no decaying non-trivial solution exists.
pub fn shoot_g(
    f: &Profile,
    params: &ModelParams,
    cfg: &ShootConfig,
) -> Result<(ShotResult, CondensateBranch)> {
    let grid = f.grid();
    if params.is_abelian() {
        return Ok((
            ShotResult::zero(grid.clone(), ProfileKind::CondensateG),
            CondensateBranch::Abelian,
        ));
    }
    let cap = params.g_cap();
    if cap < 10.0 * cfg.param_tol {
        return Ok((
            ShotResult::zero(grid.clone(), ProfileKind::CondensateG),
            CondensateBranch::BoundaryDegenerate,
        ));
    }
    let search = Search {
        default: (1e-6 * cap, (1.0 - 1e-6) * cap),
        low_class: Classification::Over,
        widen_lo: decade_down,
        widen_hi: towards_cap,
        scale: cap,
    };
    let bis = match run_search(|l| shot_g(l, f, params, cfg), &search, cfg) {
        Ok(bis) => bis,
        Err(VortexError::BracketFailure {
            lo_class: Classification::Under,
            hi_class: Classification::Under,
            ..
        }) => {
            return Ok((
                ShotResult::zero(grid.clone(), ProfileKind::CondensateG),
                CondensateBranch::Trivial,
            ))
        }
        Err(e) => return Err(e.in_stage(Stage::Condensate)),
    };
    let lambda = bis.parameter();
    let ode = CondensateEquation {
        params: *params,
        f,
        r_start: grid.r_start(),
    };
    let restart = |init: State| {
        let traj = run_events(&ode, init, &DECAY_EVENTS, grid, cfg)?;
        let class = classify_g(&traj, grid, cfg.eps_bc, lambda)?;
        Ok((traj, class))
    };
    let shot = finish(
        bis,
        grid,
        ProfileKind::CondensateG,
        lambda,
        lambda,
        cfg,
        &restart,
    )
    .map_err(|e| e.in_stage(Stage::Condensate))?;
    Ok((shot, CondensateBranch::Condensed))
}

/// One Higgs shot with slope `D` at the origin.
pub fn shot_f(d: f64, a: &Profile, g: &Profile, cfg: &ShootConfig) -> Result<ShootingOutcome> {
    let grid = a.grid();
    let r0 = grid.r_start();
    let (f, fp) = series_start_f_refined(d, a, g, r0)?;
    let ode = HiggsEquation { a, g, r_start: r0 };
    let traj = integrate_with_events(
        &ode,
        State::new(r0, f, fp),
        &RISE_EVENTS,
        cfg.horizon_factor * grid.r_max(),
        cfg.integration_tol,
        grid.nodes(),
    )?;
    let class = classify_f(&traj, grid, cfg.eps_bc)?;
    Ok(outcome(d, class, traj, grid.r_max()))
}

/// Solve the Higgs equation for frozen `a` and `g`.
pub fn shoot_f(a: &Profile, g: &Profile, cfg: &ShootConfig) -> Result<ShotResult> {
    same_grid(a, g)?;
    let m2 = measure_m2(a);
    let search = Search {
        default: (1e-4, 1e3 * m2.sqrt().max(1.0)),
        low_class: Classification::Under,
        widen_lo: decade_down,
        widen_hi: decade_up,
        scale: 0.0,
    };
    let run = || -> Result<ShotResult> {
        let bis = run_search(|d| shot_f(d, a, g, cfg), &search, cfg)?;
        let ode = HiggsEquation {
            a,
            g,
            r_start: a.grid().r_start(),
        };
        let restart = |init: State| {
            let traj = run_events(&ode, init, &RISE_EVENTS, a.grid(), cfg)?;
            let class = classify_f(&traj, a.grid(), cfg.eps_bc)?;
            Ok((traj, class))
        };
        finish(bis, a.grid(), ProfileKind::HiggsF, 0.0, 1.0, cfg, &restart)
    };
    run().map_err(|e| e.in_stage(Stage::Higgs))
}

#[cfg(test)]
mod tests;
