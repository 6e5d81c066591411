//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use z2n_core::{Params, Tolerances};

use crate::config::FileConfig;
use crate::error::{CliError, CliResult};
use crate::format::{to_json, to_table};
use crate::portrait::{render_portrait, PortraitOptions};
use crate::region::BForm;
use crate::report::{abel_report, analyze_report, cycle_report, parse_continue};
use crate::sweep::{render_svg, run_sweep, write_csv, Axis, SweepPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "z2n", version, about = "Equilibria, Abel reduction and limit cycles of z' = p z^(n-1) zbar^(n-2) + s z^n zbar^(n-1) - zbar^(2n-1)")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub p1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub p2: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub s1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub s2: Option<f64>,
    /// Symmetry index; the symmetry group has order 2n.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Relative half-width of the zero band of the quadratic forms.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Oracle checks at this many random sweep points.
    #[arg(long, global = true)]
    pub verify: Option<usize>,
    /// TOML file with default values; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form report for one parameter point.
    Analyze {
        /// Also search for limit cycles.
        #[arg(long)]
        cycles: bool,
    },
    /// Region labels over a grid of two parameters, as CSV.
    Sweep(SweepArgs),
    /// Limit cycles by return-map shooting.
    Cycle {
        /// Move Q to +1e-3 (`+`), -1e-3 (`-`) or the given value and re-detect the cycle.
        #[arg(long = "continue", allow_hyphen_values = true)]
        continue_to: Option<String>,
    },
    /// Phase portrait as SVG.
    Portrait {
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        trajectories: Option<usize>,
        #[arg(long)]
        horizon: Option<f64>,
    },
    /// Samples of the Abel coefficients, sign certificates and periodic solutions.
    Abel {
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Shooting grid size for periodic solutions.
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y_max: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    /// Region image path.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// `corrected` (sign of B) or `q2p1` (sign of Q(2 p1, p2)).
    #[arg(long)]
    pub b_form: Option<String>,
}

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

struct Resolved {
    common: Common,
    cfg: FileConfig,
}

impl Resolved {
    fn value(&self, flag: Option<f64>, cfg: Option<f64>, name: &str) -> CliResult<f64> {
        flag.or(cfg).ok_or_else(|| usage(format!("missing --{name}")))
    }

    fn n(&self) -> CliResult<u32> {
        self.common.n.or(self.cfg.n).ok_or_else(|| usage("missing --n"))
    }

    fn params(&self) -> CliResult<Params> {
        let c = &self.common;
        Params::new(
            self.value(c.p1, self.cfg.p1, "p1")?,
            self.value(c.p2, self.cfg.p2, "p2")?,
            self.value(c.s1, self.cfg.s1, "s1")?,
            self.value(c.s2, self.cfg.s2, "s2")?,
            self.n()?,
        )
        .map_err(|e| usage(e.to_string()))
    }

    fn tol(&self) -> CliResult<Tolerances> {
        let mut tol = Tolerances::default();
        if let Some(t) = self.common.tol.or(self.cfg.tol) {
            if !(t > 0.0 && t.is_finite()) {
                return Err(usage("--tol must be positive"));
            }
            tol.q_rel = t;
        }
        Ok(tol)
    }

    fn format(&self) -> CliResult<Format> {
        match (self.common.format, self.cfg.format.as_deref()) {
            (Some(f), _) => Ok(f),
            (None, None) => Ok(Format::Json),
            (None, Some(s)) => Format::from_str(s, true).map_err(usage),
        }
    }

    fn out(&self) -> Option<PathBuf> {
        self.common.out.clone().or_else(|| self.cfg.out.clone().map(PathBuf::from))
    }

    fn sweep_plan(&self, a: &SweepArgs) -> CliResult<SweepPlan> {
        let s = &self.cfg.sweep;
        let axis = |flag: &Option<String>, cfg: &Option<String>, default: Axis| -> CliResult<Axis> {
            match flag.as_ref().or(cfg.as_ref()) {
                Some(v) => v.parse().map_err(usage),
                None => Ok(default),
            }
        };
        let x = axis(&a.x, &s.x, Axis::P1)?;
        let y = axis(&a.y, &s.y, Axis::P2)?;
        let c = &self.common;
        let fixed = [(Axis::P1, c.p1, self.cfg.p1), (Axis::P2, c.p2, self.cfg.p2), (Axis::S1, c.s1, self.cfg.s1), (Axis::S2, c.s2, self.cfg.s2)];
        let mut base = [0.0; 4];
        for (k, (ax, flag, cfg)) in fixed.into_iter().enumerate() {
            if ax != x && ax != y {
                base[k] = self.value(flag, cfg, ax.as_str())?;
            }
        }
        let b_form = match a.b_form.as_ref().or(s.b_form.as_ref()) {
            Some(v) => v.parse().map_err(usage)?,
            None => BForm::default(),
        };
        Ok(SweepPlan {
            x,
            y,
            x_range: (a.x_min.or(s.x_min).unwrap_or(-2.0), a.x_max.or(s.x_max).unwrap_or(2.0)),
            y_range: (a.y_min.or(s.y_min).unwrap_or(-2.0), a.y_max.or(s.y_max).unwrap_or(2.0)),
            nx: a.nx.or(s.nx).unwrap_or(200),
            ny: a.ny.or(s.ny).unwrap_or(200),
            base,
            n: self.n()?,
            tol: self.tol()?,
            b_form,
            verify: c.verify.or(self.cfg.verify).unwrap_or(0),
            seed: c.seed.or(self.cfg.seed).unwrap_or(0),
        })
    }
}

fn emit(path: Option<PathBuf>, text: &[u8], stdout: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text)?,
    }
    Ok(())
}

fn render(format: Format, v: &serde_json::Value) -> String {
    match format {
        Format::Json => to_json(v),
        Format::Table => to_table(v),
    }
}

/// Parses `args` (program name first) and runs the subcommand, writing to `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            write!(stdout, "{e}")?;
            return Ok(());
        }
        Err(e) => return Err(usage(e.to_string())),
    };
    let cfg = match &cli.common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let r = Resolved { common: cli.common, cfg };
    match &cli.command {
        Command::Analyze { cycles } => {
            let v = analyze_report(&r.params()?, &r.tol()?, *cycles);
            emit(r.out(), render(r.format()?, &v).as_bytes(), stdout)
        }
        Command::Cycle { continue_to } => {
            let target = continue_to.as_deref().map(parse_continue).transpose()?;
            let params = r.params()?;
            let format = r.format()?;
            let v = cycle_report(&params, target)?;
            emit(r.out(), render(format, &v).as_bytes(), stdout)
        }
        Command::Abel { samples, grid } => {
            if *samples == 0 {
                return Err(usage("--samples must be positive"));
            }
            let v = abel_report(&r.params()?, &r.tol()?, *samples, *grid)?;
            emit(r.out(), render(r.format()?, &v).as_bytes(), stdout)
        }
        Command::Portrait {
            radius,
            trajectories,
            horizon,
        } => {
            let pc = &r.cfg.portrait;
            let opts = PortraitOptions {
                radius: radius.or(pc.radius),
                trajectories: trajectories.or(pc.trajectories).unwrap_or(24),
                horizon: horizon.or(pc.horizon).unwrap_or(40.0),
            };
            if opts.radius.is_some_and(|v| !(v > 0.0 && v.is_finite())) || !(opts.horizon > 0.0) {
                return Err(usage("--radius and --horizon must be positive"));
            }
            let p = render_portrait(&r.params()?, &r.tol()?, &opts);
            emit(r.out(), p.svg.as_bytes(), stdout)
        }
        Command::Sweep(a) => {
            let plan = r.sweep_plan(a)?;
            let rows = run_sweep(&plan)?;
            let mut csv = Vec::new();
            write_csv(&rows, &mut csv)?;
            emit(r.out(), &csv, stdout)?;
            if let Some(path) = a.svg.clone().or_else(|| r.cfg.sweep.svg.clone().map(PathBuf::from)) {
                std::fs::write(path, render_svg(&plan, &rows))?;
            }
            Ok(())
        }
    }
}
