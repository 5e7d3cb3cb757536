//! Command-line flags, the optional `key = value` config file and the
//! resolved [`RunConfig`]. Flags win over the file, the file over defaults.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vortex_core::analysis::{CollocationConfig, DEFAULT_THRESHOLD};
use vortex_core::{make_grid, InitialGuess, ModelParams, OuterConfig, RadialGrid, ShootConfig};

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "vortex",
    version,
    about = "Vortex profiles of the Abelian-Higgs model with a neutral scalar"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve at one (alpha, beta) and write profiles.csv and summary.json.
    Solve(Flags),
    /// Central condensate over a grid of couplings: phase.csv, boundary.json.
    Scan(Flags),
    /// Run the solution checks and write report.json.
    Validate(Flags),
    /// Compare the pipeline against its oracles and print the deltas.
    Oracle(Flags),
}

impl Command {
    fn parts(self) -> (CommandKind, Flags) {
        match self {
            Command::Solve(f) => (CommandKind::Solve, f),
            Command::Scan(f) => (CommandKind::Scan, f),
            Command::Validate(f) => (CommandKind::Validate, f),
            Command::Oracle(f) => (CommandKind::Oracle, f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Solve,
    Scan,
    Validate,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Guess {
    Tanh,
    Rational,
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Outer radius of the grid.
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Geometric stretch factor of the grid spacing.
    #[arg(long)]
    pub stretch: Option<f64>,
    /// Outer iteration stops when the sup-norm update drops below this.
    #[arg(long)]
    pub sup_tol: Option<f64>,
    /// Relative bracket width at which shooting bisection stops.
    #[arg(long)]
    pub param_tol: Option<f64>,
    /// Relaxation weight of the outer iteration.
    #[arg(long)]
    pub relax: Option<f64>,
    #[arg(long)]
    pub max_outer: Option<usize>,
    /// Starting profile for the Higgs modulus.
    #[arg(long, value_enum)]
    pub guess: Option<Guess>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write profiles.svg.
    #[arg(long)]
    pub svg: bool,
    /// Scan range LO:HI:STEP.
    #[arg(long)]
    pub alpha_range: Option<String>,
    /// Scan range LO:HI:STEP.
    #[arg(long)]
    pub beta_range: Option<String>,
    /// Condensed-phase indicator threshold on g(0).
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Flat `key = value` file with defaults for any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Every setting that a flag or config-file key can provide.
#[derive(Debug, Clone, Default)]
struct Settings {
    alpha: Option<f64>,
    beta: Option<f64>,
    rmax: Option<f64>,
    nodes: Option<usize>,
    stretch: Option<f64>,
    sup_tol: Option<f64>,
    param_tol: Option<f64>,
    relax: Option<f64>,
    max_outer: Option<usize>,
    guess: Option<Guess>,
    out: Option<PathBuf>,
    svg: Option<bool>,
    alpha_range: Option<String>,
    beta_range: Option<String>,
    threshold: Option<f64>,
}

impl Settings {
    fn from_flags(f: Flags) -> Self {
        Self {
            alpha: f.alpha,
            beta: f.beta,
            rmax: f.rmax,
            nodes: f.nodes,
            stretch: f.stretch,
            sup_tol: f.sup_tol,
            param_tol: f.param_tol,
            relax: f.relax,
            max_outer: f.max_outer,
            guess: f.guess,
            out: f.out,
            svg: f.svg.then_some(true),
            alpha_range: f.alpha_range,
            beta_range: f.beta_range,
            threshold: f.threshold,
        }
    }

    /// Fill every unset field from `lower`.
    fn or(self, lower: Settings) -> Settings {
        Settings {
            alpha: self.alpha.or(lower.alpha),
            beta: self.beta.or(lower.beta),
            rmax: self.rmax.or(lower.rmax),
            nodes: self.nodes.or(lower.nodes),
            stretch: self.stretch.or(lower.stretch),
            sup_tol: self.sup_tol.or(lower.sup_tol),
            param_tol: self.param_tol.or(lower.param_tol),
            relax: self.relax.or(lower.relax),
            max_outer: self.max_outer.or(lower.max_outer),
            guess: self.guess.or(lower.guess),
            out: self.out.or(lower.out),
            svg: self.svg.or(lower.svg),
            alpha_range: self.alpha_range.or(lower.alpha_range),
            beta_range: self.beta_range.or(lower.beta_range),
            threshold: self.threshold.or(lower.threshold),
        }
    }

    fn parse_file(path: &Path) -> Result<Settings> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut s = Settings::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| CliError::ConfigFile {
                path: path.to_path_buf(),
                line: idx + 1,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim().replace('_', "-"), value.trim());
            let num = || value.parse::<f64>().map_err(|e| bad(format!("{key}: {e}")));
            let int = || {
                value
                    .parse::<usize>()
                    .map_err(|e| bad(format!("{key}: {e}")))
            };
            match key.as_str() {
                "alpha" => s.alpha = Some(num()?),
                "beta" => s.beta = Some(num()?),
                "rmax" => s.rmax = Some(num()?),
                "nodes" => s.nodes = Some(int()?),
                "stretch" => s.stretch = Some(num()?),
                "sup-tol" => s.sup_tol = Some(num()?),
                "param-tol" => s.param_tol = Some(num()?),
                "relax" => s.relax = Some(num()?),
                "max-outer" => s.max_outer = Some(int()?),
                "threshold" => s.threshold = Some(num()?),
                "guess" => {
                    s.guess =
                        Some(Guess::from_str(value, true).map_err(|e| bad(format!("guess: {e}")))?)
                }
                "out" => s.out = Some(PathBuf::from(value)),
                "svg" => s.svg = Some(value.parse().map_err(|e| bad(format!("svg: {e}")))?),
                "alpha-range" => s.alpha_range = Some(value.to_string()),
                "beta-range" => s.beta_range = Some(value.to_string()),
                _ => return Err(bad(format!("unknown key {key:?}"))),
            }
        }
        Ok(s)
    }
}

/// Grid parameters of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub r_max: f64,
    pub nodes: usize,
    pub stretch: f64,
}

impl GridSpec {
    pub fn build(&self) -> Result<Arc<RadialGrid>> {
        Ok(Arc::new(make_grid(self.r_max, self.nodes, self.stretch)?))
    }
}

/// Fully resolved configuration of one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: ModelParams,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub grid: GridSpec,
    pub shoot: ShootConfig,
    pub outer: OuterConfig,
    pub oracle: CollocationConfig,
    pub threshold: f64,
    pub out_dir: PathBuf,
    pub emit_svg: bool,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let (command, flags) = cli.command.parts();
        let file = match &flags.config {
            Some(path) => Settings::parse_file(path)?,
            None => Settings::default(),
        };
        let s = Settings::from_flags(flags).or(file);

        let alpha = s.alpha.unwrap_or(0.3);
        let beta = s.beta.unwrap_or(1.0);
        let params = ModelParams::new(alpha, beta).map_err(|e| CliError::Usage(e.to_string()))?;
        let alphas = match &s.alpha_range {
            Some(r) => parse_range("alpha-range", r)?,
            None => vec![alpha],
        };
        let betas = match &s.beta_range {
            Some(r) => parse_range("beta-range", r)?,
            None => vec![beta],
        };
        let grid = GridSpec {
            r_max: s.rmax.unwrap_or(25.0),
            nodes: s.nodes.unwrap_or(3000),
            stretch: s.stretch.unwrap_or(1.001),
        };
        let shoot = ShootConfig {
            param_tol: s.param_tol.unwrap_or(ShootConfig::default().param_tol),
            ..ShootConfig::default()
        };
        let outer_default = OuterConfig::default();
        let outer = OuterConfig {
            sup_tol: s.sup_tol.unwrap_or(outer_default.sup_tol),
            max_outer: s.max_outer.unwrap_or(outer_default.max_outer),
            relaxation: s.relax.unwrap_or(outer_default.relaxation),
            initial_guess: match s.guess.unwrap_or(Guess::Tanh) {
                Guess::Tanh => InitialGuess::Tanh,
                Guess::Rational => InitialGuess::RationalRise,
            },
        };
        let threshold = s.threshold.unwrap_or(DEFAULT_THRESHOLD);
        if !(threshold > 0.0 && threshold.is_finite()) {
            return Err(CliError::Usage(format!(
                "threshold must be positive, got {threshold}"
            )));
        }
        let cfg = RunConfig {
            command,
            params,
            alphas,
            betas,
            grid,
            shoot,
            outer,
            oracle: CollocationConfig::default(),
            threshold,
            out_dir: s.out.unwrap_or_else(|| PathBuf::from("vortex-out")),
            emit_svg: s.svg.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Check all tolerances and the grid before any computation starts.
    fn validate(&self) -> Result<()> {
        let usage = |e: vortex_core::VortexError| CliError::Usage(e.to_string());
        self.shoot.validate().map_err(usage)?;
        self.outer.validate().map_err(usage)?;
        self.grid.build().map_err(|e| match e {
            CliError::Solver(v) => usage(v),
            other => other,
        })?;
        for &a in &self.alphas {
            ModelParams::new(a, self.betas[0]).map_err(usage)?;
        }
        for &b in &self.betas {
            ModelParams::new(self.alphas[0], b).map_err(usage)?;
        }
        Ok(())
    }
}

/// `LO:HI:STEP` inclusive of `HI` up to rounding. Values are rounded to 12
/// decimals so that `0.6 + 3 * 0.01` prints as `0.63`.
pub fn parse_range(name: &str, text: &str) -> Result<Vec<f64>> {
    let usage = |why: &str| CliError::Usage(format!("--{name} {text:?}: {why}"));
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(usage("expected LO:HI:STEP"));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| usage("not a number"));
    let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
    if !(lo.is_finite() && hi.is_finite() && step > 0.0 && step.is_finite()) {
        return Err(usage("bounds must be finite and STEP positive"));
    }
    if hi < lo {
        return Err(usage("empty range"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|k| ((lo + k as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig> {
        let cli =
            Cli::try_parse_from(std::iter::once("vortex").chain(args.iter().copied())).unwrap();
        RunConfig::from_cli(cli)
    }

    #[test]
    fn range_is_inclusive() {
        let v = parse_range("alpha-range", "0.6:0.8:0.01").unwrap();
        assert_eq!(v.len(), 21);
        assert_eq!(v[3], 0.63);
        assert_eq!(*v.last().unwrap(), 0.8);
        assert_eq!(parse_range("x", "1:1:0.5").unwrap(), vec![1.0]);
    }

    #[test]
    fn bad_ranges_are_usage_errors() {
        for text in ["0.8:0.6:0.01", "0.6:0.8", "0.6:0.8:0", "a:b:c"] {
            assert!(
                matches!(parse_range("alpha-range", text), Err(CliError::Usage(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn defaults() {
        let cfg = parse(&["solve"]).unwrap();
        assert_eq!(cfg.command, CommandKind::Solve);
        assert_eq!(cfg.params.alpha(), 0.3);
        assert_eq!(
            cfg.grid,
            GridSpec {
                r_max: 25.0,
                nodes: 3000,
                stretch: 1.001
            }
        );
        assert!(!cfg.emit_svg);
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(
            &path,
            "# comment\nalpha = 0.5\nbeta = 2\nsup_tol = 1e-7\nsvg = true\n",
        )
        .unwrap();
        let cfg = parse(&[
            "solve",
            "--config",
            path.to_str().unwrap(),
            "--alpha",
            "0.4",
        ])
        .unwrap();
        assert_eq!(cfg.params.alpha(), 0.4);
        assert_eq!(cfg.params.beta(), 2.0);
        assert_eq!(cfg.outer.sup_tol, 1e-7);
        assert!(cfg.emit_svg);
        assert_eq!(cfg.grid.nodes, 3000);
    }

    #[test]
    fn unknown_file_key_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "alpha = 0.5\ncolour = red\n").unwrap();
        let err = parse(&["solve", "--config", path.to_str().unwrap()]).unwrap_err();
        assert!(matches!(err, CliError::ConfigFile { line: 2, .. }), "{err}");
    }

    #[test]
    fn nonpositive_tolerances_are_rejected() {
        assert!(matches!(
            parse(&["solve", "--sup-tol", "0"]),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            parse(&["solve", "--param-tol=-1"]),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            parse(&["solve", "--alpha=-0.1"]),
            Err(CliError::Usage(_))
        ));
    }
}
