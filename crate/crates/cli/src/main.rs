use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use plateball::roots::DEFAULT_TOL;
use plateball_cli::{
    cmd_bounds, cmd_crossings, cmd_eval, cmd_root, cmd_trajectory, cmd_verify, CliError, Config,
    EvalFn, Figure, Format, OutputRecord, RootKind, TrajectoryArgs,
};

#[derive(Parser, Debug)]
#[command(name = "plateball", version, about = "Maxwell-time roots, bounds and crossings")]
struct Cli {
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,

    /// TOML file with tolerances, grid sizes and eps_sing
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write data (or the verification report) here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Half-width of the excluded band around m = 1
    #[arg(long, global = true)]
    eps_sing: Option<f64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a special function at one point
    Eval {
        #[arg(value_enum)]
        func: EvalFn,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        s: Option<f64>,
    },
    /// Minimal positive root p1, p2 (at m) or x1, x2 (at s)
    Root {
        #[arg(value_enum)]
        which: RootKind,
        #[arg(long, conflicts_with = "s")]
        m: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Figure data: a root curve with its estimates
    Bounds {
        #[arg(value_enum)]
        which: Figure,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Crossings of p1 and p2
    Crossings {
        #[arg(long, default_value_t = 5)]
        kmax: u32,
    },
    /// Leading-order trajectory samples
    Trajectory {
        #[arg(long, allow_hyphen_values = true)]
        theta0: f64,
        #[arg(long, allow_hyphen_values = true)]
        d0: f64,
        #[arg(long)]
        m: f64,
        #[arg(long, default_value_t = 0.05)]
        rho0: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 20.0)]
        s_max: f64,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Check every estimate on a grid; exit 1 on any failure
    Verify {
        #[arg(long)]
        m_points: Option<usize>,
        #[arg(long)]
        s_points: Option<usize>,
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        slack: Option<f64>,
    },
}

fn need(v: Option<f64>, name: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{name}")))
}

fn emit(cli: &Cli, rec: &OutputRecord) -> Result<(), CliError> {
    let text = rec.render(cli.format)?;
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if cli.eps_sing.is_some() {
        cfg.eps_sing = cli.eps_sing;
    }
    let eps = cfg.eps();

    let rec = match &cli.cmd {
        Cmd::Eval { func, p, m, x, s } => {
            let args = match func.arg_names() {
                ["p", "m"] => vec![need(*p, "p")?, need(*m, "m")?],
                ["x", "s"] => vec![need(*x, "x")?, need(*s, "s")?],
                _ => vec![need(*x, "x")?],
            };
            cmd_eval(*func, &args)?
        }
        Cmd::Root { which, m, s, tol } => {
            let tol = tol.or(cfg.root_tol).unwrap_or(DEFAULT_TOL);
            let param = match which {
                RootKind::P1 | RootKind::P2 => need(*m, "m")?,
                RootKind::X1 | RootKind::X2 => need(*s, "s")?,
            };
            cmd_root(*which, param, tol, eps)?
        }
        Cmd::Bounds { which, from, to, count } => {
            let (a, b) = which.default_range();
            cmd_bounds(*which, from.unwrap_or(a), to.unwrap_or(b), *count, eps)?
        }
        Cmd::Crossings { kmax } => cmd_crossings(*kmax)?,
        Cmd::Trajectory { theta0, d0, m, rho0, alpha, s_max, count } => {
            let args = TrajectoryArgs {
                theta0: *theta0,
                d0: *d0,
                rho0: *rho0,
                alpha: *alpha,
                m: *m,
                s_max: *s_max,
                count: *count,
            };
            let (rec, warning) = cmd_trajectory(&args, eps)?;
            if let Some(w) = warning {
                eprintln!("warning: {w}");
            }
            rec
        }
        Cmd::Verify { m_points, s_points, kmax, slack } => {
            let mut grid = cfg.grid.clone();
            let mut tol = cfg.tolerances;
            if let Some(n) = m_points {
                grid.m_points_per_side = *n;
            }
            if let Some(n) = s_points {
                grid.s_points = *n;
            }
            if let Some(k) = kmax {
                grid.k_max = *k;
            }
            if let Some(v) = slack {
                tol.slack = *v;
            }
            let report = cmd_verify(&grid, &tol, cli.out.as_deref())?;
            print!("{}", report.summary());
            eprintln!("{} failures", report.total_failures());
            return Ok(if report.passed() { 0 } else { 1 });
        }
    };
    emit(cli, &rec)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
