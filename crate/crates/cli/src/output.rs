//! Result files. Every file is written to a temporary sibling and renamed
//! into place, so a failed run never leaves a truncated file behind.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use vortex_core::analysis::{PhaseDiagram, PointStatus};
use vortex_core::VortexSolution;

use crate::config::GridSpec;
use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Create `dir` if needed and make sure files can be created in it.
pub fn ensure_writable(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    tempfile::NamedTempFile::new_in(dir).map_err(io_err(dir))?;
    Ok(())
}

pub fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut builder = tempfile::Builder::new();
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        builder.permissions(std::fs::Permissions::from_mode(0o644));
    }
    let mut tmp = builder.tempfile_in(dir).map_err(io_err(dir))?;
    tmp.write_all(contents).map_err(io_err(&path))?;
    tmp.as_file().sync_all().map_err(io_err(&path))?;
    tmp.persist(&path).map_err(|e| CliError::Io {
        path: path.clone(),
        source: e.error,
    })?;
    Ok(path)
}

pub fn to_json<T: Serialize>(what: &'static str, value: &T) -> Result<Vec<u8>> {
    let mut out =
        serde_json::to_vec_pretty(value).map_err(|source| CliError::Json { what, source })?;
    out.push(b'\n');
    Ok(out)
}

/// `r,a,g,f` with 17 significant digits, one row per node.
pub fn profiles_csv(sol: &VortexSolution) -> String {
    let nodes = sol.a.grid().nodes();
    let mut out = String::from("r,a,g,f\n");
    for (i, r) in nodes.iter().enumerate() {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            r,
            sol.a.values()[i],
            sol.g.values()[i],
            sol.f.values()[i]
        );
    }
    out
}

#[derive(Debug, Serialize)]
pub struct FieldTriple<T> {
    pub a: T,
    pub g: T,
    pub one_minus_f: T,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub alpha: f64,
    pub beta: f64,
    pub g0: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub lambda: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub branch: vortex_core::CondensateBranch,
    pub converged: bool,
    pub outer_iterations: usize,
    /// Sup-norm residuals of the a, g and f equations.
    pub residuals: [f64; 3],
    pub decay_fits: FieldTriple<Option<f64>>,
    pub grid: GridSummary,
}

#[derive(Debug, Serialize)]
pub struct GridSummary {
    pub r_max: f64,
    pub nodes: usize,
    pub stretch: f64,
}

impl Summary {
    pub fn new(sol: &VortexSolution, grid: &GridSpec) -> Self {
        let [fa, fg, ff] = sol.decay_fits;
        Self {
            schema_version: SCHEMA_VERSION,
            alpha: sol.params.alpha(),
            beta: sol.params.beta(),
            g0: sol.g0(),
            b: sol.shot_b,
            lambda: sol.shot_lambda,
            d: sol.shot_d,
            branch: sol.branch,
            converged: sol.converged,
            outer_iterations: sol.outer_iterations,
            residuals: sol.residuals,
            decay_fits: FieldTriple {
                a: fa,
                g: fg,
                one_minus_f: ff,
            },
            grid: GridSummary {
                r_max: grid.r_max,
                nodes: grid.nodes,
                stretch: grid.stretch,
            },
        }
    }
}

/// `alpha,beta,g0,converged,status`, rows in `(alpha, beta)` order.
pub fn phase_csv(d: &PhaseDiagram) -> String {
    let mut out = String::from("alpha,beta,g0,converged,status\n");
    for (i, alpha) in d.alphas.iter().enumerate() {
        for (j, beta) in d.betas.iter().enumerate() {
            let st = &d.status[i][j];
            let _ = writeln!(
                out,
                "{alpha},{beta},{:.16e},{},{}",
                d.g0_values[i][j],
                st.is_ok(),
                st.label()
            );
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct BoundaryEntry {
    pub beta: f64,
    /// Midpoint of the last condensed / Abelian pair of scanned alphas.
    pub alpha_star: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct BoundaryReport {
    pub schema_version: u32,
    pub threshold: f64,
    pub estimates: Vec<BoundaryEntry>,
    pub non_monotone_betas: Vec<f64>,
    pub inconsistent_betas: Vec<f64>,
    pub failed_points: Vec<FailedPoint>,
}

#[derive(Debug, Serialize)]
pub struct FailedPoint {
    pub alpha: f64,
    pub beta: f64,
    pub status: PointStatus,
}

impl BoundaryReport {
    pub fn new(d: &PhaseDiagram) -> Self {
        let estimates = d
            .betas
            .iter()
            .map(|&beta| BoundaryEntry {
                beta,
                alpha_star: d
                    .boundary_estimates
                    .iter()
                    .find(|(b, _)| *b == beta)
                    .map(|&(_, a)| a),
            })
            .collect();
        let mut failed_points = Vec::new();
        for (i, &alpha) in d.alphas.iter().enumerate() {
            for (j, &beta) in d.betas.iter().enumerate() {
                if !d.status[i][j].is_ok() {
                    failed_points.push(FailedPoint {
                        alpha,
                        beta,
                        status: d.status[i][j].clone(),
                    });
                }
            }
        }
        Self {
            schema_version: SCHEMA_VERSION,
            threshold: d.threshold,
            estimates,
            non_monotone_betas: d.non_monotone_betas(),
            inconsistent_betas: d.inconsistent_betas(),
            failed_points,
        }
    }
}

/// Line plot of `a`, `g` and `f` against `r`.
pub fn profiles_svg(sol: &VortexSolution) -> String {
    const W: f64 = 720.0;
    const H: f64 = 420.0;
    const M: f64 = 50.0;
    let nodes = sol.a.grid().nodes();
    let r_max = sol.a.r_max();
    let x = |r: f64| M + (W - 2.0 * M) * r / r_max;
    let y = |v: f64| H - M - (H - 2.0 * M) * v.clamp(0.0, 1.0);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<path d="M{M} {M} V{} H{}" fill="none" stroke="black"/>"#,
        H - M,
        W - M
    );
    for k in 0..=5 {
        let v = k as f64 / 5.0;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{v:.1}</text>"#,
            M - 6.0,
            y(v) + 4.0
        );
        let r = r_max * v;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{r:.1}</text>"#,
            x(r),
            H - M + 16.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">r</text>"#,
        W / 2.0,
        H - 10.0
    );

    let series = [
        ("a", sol.a.values(), "#1f77b4"),
        ("g", sol.g.values(), "#2ca02c"),
        ("f", sol.f.values(), "#d62728"),
    ];
    for (k, (name, values, colour)) in series.iter().enumerate() {
        let mut d = String::new();
        for (i, (&r, &v)) in nodes.iter().zip(values.iter()).enumerate() {
            let _ = write!(
                d,
                "{}{:.2} {:.2}",
                if i == 0 { "M" } else { " L" },
                x(r),
                y(v)
            );
        }
        let _ = writeln!(
            out,
            r#"<path d="{d}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#
        );
        let ly = M + 16.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{colour}" stroke-width="2"/><text x="{}" y="{}">{name}</text>"#,
            W - M - 60.0,
            W - M - 40.0,
            W - M - 34.0,
            ly + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle">alpha = {}, beta = {}</text>"#,
        W / 2.0,
        sol.params.alpha(),
        sol.params.beta()
    );
    out.push_str("</svg>\n");
    out
}
