use serde::Serialize;
use vortex_core::analysis::{
    analytic_a_oracle, bessel_zero_oracle, collocation_oracle, fit_decay, invariant_violations,
    scan_phase, DecayField,
};
use vortex_core::integrate::comparison_zero;
use vortex_core::shoot::shoot_a;
use vortex_core::{solve_vortex, Profile, ProfileKind, VortexSolution};

use crate::config::RunConfig;
use crate::error::{exit, Result};
use crate::output::{
    ensure_writable, phase_csv, profiles_csv, profiles_svg, to_json, write_atomic, BoundaryReport,
    Summary, SCHEMA_VERSION,
};

pub const RESIDUAL_TOL: f64 = 1e-5;
pub const ORACLE_TOL: f64 = 1e-3;
pub const GAUGE_ORACLE_TOL: f64 = 1e-6;
pub const BESSEL_ZERO_TOL: f64 = 1e-5;
pub const BESSEL_ZERO: f64 = 2.404825558;
/// `|g|` below this counts as no condensate.
const ZERO_CONDENSATE: f64 = 1e-8;

fn solve(cfg: &RunConfig) -> Result<VortexSolution> {
    let grid = cfg.grid.build()?;
    Ok(solve_vortex(&cfg.params, &grid, &cfg.shoot, &cfg.outer)?)
}

pub fn run_solve(cfg: &RunConfig) -> Result<i32> {
    ensure_writable(&cfg.out_dir)?;
    let sol = solve(cfg)?;
    write_atomic(&cfg.out_dir, "profiles.csv", profiles_csv(&sol).as_bytes())?;
    write_atomic(
        &cfg.out_dir,
        "summary.json",
        &to_json("summary", &Summary::new(&sol, &cfg.grid))?,
    )?;
    if cfg.emit_svg {
        write_atomic(&cfg.out_dir, "profiles.svg", profiles_svg(&sol).as_bytes())?;
    }
    if sol.converged {
        Ok(exit::OK)
    } else {
        eprintln!(
            "outer iteration stopped after {} steps; last update {:e}",
            sol.outer_iterations,
            sol.distance_history.last().copied().unwrap_or(f64::NAN)
        );
        Ok(exit::NOT_CONVERGED)
    }
}

pub fn run_scan(cfg: &RunConfig) -> Result<i32> {
    ensure_writable(&cfg.out_dir)?;
    let grid = cfg.grid.build()?;
    let diagram = scan_phase(
        &cfg.alphas,
        &cfg.betas,
        &grid,
        &cfg.shoot,
        &cfg.outer,
        cfg.threshold,
    )?;
    write_atomic(&cfg.out_dir, "phase.csv", phase_csv(&diagram).as_bytes())?;
    let report = BoundaryReport::new(&diagram);
    write_atomic(
        &cfg.out_dir,
        "boundary.json",
        &to_json("boundary", &report)?,
    )?;
    if diagram.all_ok() {
        Ok(exit::OK)
    } else {
        for p in &report.failed_points {
            eprintln!("alpha = {}, beta = {}: {:?}", p.alpha, p.beta, p.status);
        }
        Ok(exit::PARTIAL_SCAN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub measured: Option<f64>,
    pub threshold: Option<f64>,
    pub detail: String,
}

impl Check {
    fn new(
        name: &str,
        pass: bool,
        measured: Option<f64>,
        threshold: Option<f64>,
        detail: String,
    ) -> Self {
        Self {
            name: name.to_string(),
            status: if pass {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            measured,
            threshold,
            detail,
        }
    }

    fn not_applicable(name: &str, detail: &str) -> Self {
        Self {
            name: name.to_string(),
            status: CheckStatus::NotApplicable,
            measured: None,
            threshold: None,
            detail: detail.to_string(),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub alpha: f64,
    pub beta: f64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn decay_check(name: &str, sol: &VortexSolution, field: DecayField, tol: f64) -> Check {
    match fit_decay(sol.field(field), field, &sol.params) {
        Ok(fit) => Check::new(
            name,
            fit.relative_error() < tol && fit.r_squared >= 0.99,
            Some(fit.fitted_exponent),
            Some(fit.expected_exponent),
            format!(
                "relative error {:.3e} (limit {tol}), r² = {:.6} on [{:.2}, {:.2}]",
                fit.relative_error(),
                fit.r_squared,
                fit.window.0,
                fit.window.1
            ),
        ),
        Err(e) => Check::new(
            name,
            false,
            None,
            Some(field.expected_exponent(&sol.params)),
            e.to_string(),
        ),
    }
}

trait FieldAccess {
    fn field(&self, field: DecayField) -> &Profile;
}

impl FieldAccess for VortexSolution {
    fn field(&self, field: DecayField) -> &Profile {
        match field {
            DecayField::A => &self.a,
            DecayField::G => &self.g,
            DecayField::OneMinusF => &self.f,
        }
    }
}

/// Every check on a solution, in report order.
pub fn solution_checks(cfg: &RunConfig, sol: &VortexSolution) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let last = sol.distance_history.last().copied();
    checks.push(Check::new(
        "converged",
        sol.converged,
        last,
        Some(cfg.outer.sup_tol),
        format!("{} outer iterations", sol.outer_iterations),
    ));
    for (name, r) in ["residual_a", "residual_g", "residual_f"]
        .iter()
        .zip(sol.residuals)
    {
        checks.push(Check::new(
            name,
            r < RESIDUAL_TOL,
            Some(r),
            Some(RESIDUAL_TOL),
            "sup over interior nodes".into(),
        ));
    }
    let violations = invariant_violations(sol);
    checks.push(Check::new(
        "invariants",
        violations.is_empty(),
        Some(violations.len() as f64),
        Some(0.0),
        violations.join("; "),
    ));

    let max_g = sol.g.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let no_condensate = max_g < ZERO_CONDENSATE;
    let bound = sol.params.g_cap();
    let g0 = sol.g0();
    checks.push(if sol.params.is_abelian() {
        Check::new(
            "g0_bound",
            no_condensate,
            Some(max_g),
            Some(ZERO_CONDENSATE),
            "Abelian regime: g ≡ 0".into(),
        )
    } else {
        Check::new(
            "g0_bound",
            (0.0..bound).contains(&g0),
            Some(g0),
            Some(bound),
            "0 ≤ g(0) < √(1 − 2α²)".into(),
        )
    });

    checks.push(decay_check("decay_a", sol, DecayField::A, 0.10));
    checks.push(if no_condensate {
        Check::not_applicable("decay_g", "g vanishes identically")
    } else {
        decay_check("decay_g", sol, DecayField::G, 0.10)
    });
    checks.push(decay_check(
        "decay_one_minus_f",
        sol,
        DecayField::OneMinusF,
        0.15,
    ));

    let grid = sol.a.grid().clone();
    checks.push(match collocation_oracle(&sol.params, &grid, &cfg.oracle) {
        Ok(oracle) => {
            let delta = profile_delta(sol, &oracle.solution);
            Check::new(
                "oracle_delta",
                delta < ORACLE_TOL,
                Some(delta),
                Some(ORACLE_TOL),
                format!("collocation Newton residual {:.2e}", oracle.newton_residual),
            )
        }
        Err(e) => Check::new("oracle_delta", false, None, Some(ORACLE_TOL), e.to_string()),
    });
    Ok(checks)
}

/// Largest sup-norm difference over the three profiles.
pub fn profile_delta(x: &VortexSolution, y: &VortexSolution) -> f64 {
    x.a.sup_distance(&y.a)
        .max(x.g.sup_distance(&y.g))
        .max(x.f.sup_distance(&y.f))
}

pub fn run_validate(cfg: &RunConfig) -> Result<i32> {
    ensure_writable(&cfg.out_dir)?;
    let checks = match solve(cfg) {
        Ok(sol) => solution_checks(cfg, &sol)?,
        Err(e) if e.exit_code() == exit::USAGE => return Err(e),
        Err(e) => vec![Check::new(
            "converged",
            false,
            None,
            Some(cfg.outer.sup_tol),
            e.to_string(),
        )],
    };
    let passed = !checks.iter().any(Check::failed);
    let report = Report {
        schema_version: SCHEMA_VERSION,
        alpha: cfg.params.alpha(),
        beta: cfg.params.beta(),
        passed,
        checks,
    };
    write_atomic(&cfg.out_dir, "report.json", &to_json("report", &report)?)?;
    for c in report.checks.iter().filter(|c| c.failed()) {
        eprintln!(
            "check {} failed: measured {:?}, limit {:?}; {}",
            c.name, c.measured, c.threshold, c.detail
        );
    }
    Ok(if passed { exit::OK } else { exit::CHECK_FAILED })
}

#[derive(Debug, Serialize)]
pub struct OracleDelta {
    pub name: String,
    pub delta: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl OracleDelta {
    fn new(name: impl Into<String>, delta: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            delta,
            tolerance,
            passed: delta < tolerance,
        }
    }
}

/// Sup error of the gauge shot against `βr K₁(βr)` with `f` frozen at 1.
pub fn gauge_oracle_delta(cfg: &RunConfig, beta: f64) -> Result<f64> {
    let grid = cfg.grid.build()?;
    let f = Profile::from_fn(grid.clone(), ProfileKind::HiggsF, |r| {
        if r > 0.0 {
            1.0
        } else {
            0.0
        }
    })?;
    let shot = shoot_a(&f, beta, &cfg.shoot)?;
    Ok(grid
        .nodes()
        .iter()
        .zip(shot.profile.values())
        .map(|(&r, &a)| (a - analytic_a_oracle(beta, r)).abs())
        .fold(0.0, f64::max))
}

pub fn oracle_deltas(cfg: &RunConfig) -> Result<Vec<OracleDelta>> {
    let beta = cfg.params.beta();
    let mut out = vec![OracleDelta::new(
        format!("gauge_analytic_beta_{beta}"),
        gauge_oracle_delta(cfg, beta)?,
        GAUGE_ORACLE_TOL,
    )];
    let zero = comparison_zero(1.0, cfg.shoot.integration_tol)?;
    out.push(OracleDelta::new(
        "bessel_zero_reference",
        (zero - BESSEL_ZERO).abs(),
        BESSEL_ZERO_TOL,
    ));
    out.push(OracleDelta::new(
        "bessel_zero_series",
        (zero - bessel_zero_oracle(1.0)).abs(),
        BESSEL_ZERO_TOL,
    ));
    let sol = solve(cfg)?;
    let oracle = collocation_oracle(&cfg.params, sol.a.grid(), &cfg.oracle)?;
    out.push(OracleDelta::new(
        "collocation_vs_shooting",
        profile_delta(&sol, &oracle.solution),
        ORACLE_TOL,
    ));
    Ok(out)
}

#[derive(Debug, Serialize)]
struct OracleReport {
    schema_version: u32,
    alpha: f64,
    beta: f64,
    passed: bool,
    deltas: Vec<OracleDelta>,
}

pub fn run_oracle(cfg: &RunConfig) -> Result<i32> {
    let deltas = oracle_deltas(cfg)?;
    let passed = deltas.iter().all(|d| d.passed);
    let report = OracleReport {
        schema_version: SCHEMA_VERSION,
        alpha: cfg.params.alpha(),
        beta: cfg.params.beta(),
        passed,
        deltas,
    };
    print!(
        "{}",
        String::from_utf8_lossy(&to_json("oracle report", &report)?)
    );
    Ok(if passed { exit::OK } else { exit::CHECK_FAILED })
}
