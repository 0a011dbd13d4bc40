//! `rabi`: constraint polynomials, tridiagonal spectra, and Juddian
//! degeneracies of the quantum Rabi model from the command line.
//!
//! Every command emits machine-readable output (CSV or JSON lines) with
//! fixed float formatting, so identical invocations produce byte-identical
//! files regardless of thread count.

mod commands;
mod config;
mod emit;
mod rational;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{Format, RunConfig};

#[derive(Parser)]
#[command(name = "rabi", version, about = "Juddian points of the quantum Rabi model")]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// Optional key=value config file (flags override it).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Tabular output format.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Eigenvalue bisection width target.
    #[arg(long, global = true)]
    bisect_tol: Option<f64>,

    /// Acceptance scale for Juddian residuals.
    #[arg(long, global = true)]
    residual_tol: Option<f64>,

    /// Exclusion radius around integer poles of the G series.
    #[arg(long, global = true)]
    pole_guard: Option<f64>,

    /// Order ceiling for exact polynomial construction.
    #[arg(long, global = true)]
    exact_cap: Option<u32>,

    /// Crossing-scan grid density.
    #[arg(long, global = true)]
    scan_steps: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    X,
    Y,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Weyl,
    Interlace,
    Oracle,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Print P_n as JSON, evaluate it exactly, or restrict it to an axis.
    Poly {
        n: u32,
        /// Evaluate exactly at rational X Y (fractions and decimals accepted).
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        eval: Option<Vec<String>>,
        /// Restrict to an axis: x gives P_n(x, 0), y gives P_n(0, Y).
        #[arg(long, value_enum)]
        restrict: Option<Axis>,
    },
    /// CSV of the zeros of x ↦ P_N(x, y) (eigenvalues of A_N(y)).
    Zeros {
        n: usize,
        y: f64,
        /// Only zeros in (lo, hi].
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        range: Option<Vec<f64>>,
    },
    /// CSV of Juddian-count density records over a grid of levels.
    Density {
        delta: f64,
        gamma: f64,
        #[arg(required = true)]
        ns: Vec<usize>,
    },
    /// JSON lines of parameter pairs carrying Juddian eigenvalues at both
    /// level m and level N.
    Doublejudd { m: usize, n: usize },
    /// CSV polyline (y,x) of the m-th zero-locus branch of P_n.
    Branch {
        n: usize,
        m: usize,
        /// Number of samples along 0 ≤ y ≤ m².
        #[arg(long, default_value_t = 256)]
        steps: usize,
    },
    /// CSV samples of the G-function pair over a z-interval.
    Gscan {
        z_lo: f64,
        z_hi: f64,
        samples: usize,
        g: f64,
        delta: f64,
    },
    /// Run a verification suite; the exit code is a bitmask of failing
    /// suites (oracle = 1, weyl = 2, interlace = 4).
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Exact-oracle order cap (suite: oracle).
        #[arg(long)]
        n: Option<u32>,
        /// Matrix order (suites: weyl, interlace).
        #[arg(long = "N")]
        big_n: Option<usize>,
        /// Perturbation strength y = Δ².
        #[arg(long)]
        y: Option<f64>,
        /// Principal-minor offset (suite: interlace).
        #[arg(long)]
        m: Option<usize>,
    },
}

fn build_config(o: &Overrides) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &o.config {
        cfg.apply_file(path)?;
    }
    if let Some(v) = o.bisect_tol {
        cfg.apply("bisect_tol", &v.to_string())?;
    }
    if let Some(v) = o.residual_tol {
        cfg.apply("residual_tol", &v.to_string())?;
    }
    if let Some(v) = o.pole_guard {
        cfg.apply("pole_guard", &v.to_string())?;
    }
    if let Some(v) = o.exact_cap {
        cfg.apply("exact_cap", &v.to_string())?;
    }
    if let Some(v) = o.scan_steps {
        cfg.apply("scan_steps", &v.to_string())?;
    }
    if let Some(v) = o.threads {
        cfg.threads = v;
    }
    if let Some(f) = o.format {
        cfg.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    if let Some(path) = &o.output {
        cfg.output = Some(path.clone());
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<i32> {
    let cfg = build_config(&cli.overrides)?;
    if cfg.threads > 0 {
        // Ignore the error if a pool already exists (tests call run twice).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global();
    }
    let mut out = emit::sink(cfg.output.as_deref())?;
    match cli.command {
        Command::Poly { n, eval, restrict } => {
            let eval = eval.as_ref().map(|v| (v[0].as_str(), v[1].as_str()));
            let restrict = restrict.map(|a| match a {
                Axis::X => commands::Restrict::XAxis,
                Axis::Y => commands::Restrict::YAxis,
            });
            commands::cmd_poly(&mut out, &cfg, n, eval, restrict)?;
        }
        Command::Zeros { n, y, range } => {
            let range = range.map(|r| (r[0], r[1]));
            commands::cmd_zeros(&mut out, &cfg, n, y, range)?;
        }
        Command::Density { delta, gamma, ns } => {
            commands::cmd_density(&mut out, &cfg, delta, gamma, &ns)?;
        }
        Command::Doublejudd { m, n } => {
            commands::cmd_doublejudd(&mut out, &cfg, m, n)?;
        }
        Command::Branch { n, m, steps } => {
            commands::cmd_branch(&mut out, &cfg, n, m, steps)?;
        }
        Command::Gscan {
            z_lo,
            z_hi,
            samples,
            g,
            delta,
        } => {
            commands::cmd_gscan(&mut out, &cfg, z_lo, z_hi, samples, g, delta)?;
        }
        Command::Verify {
            suite,
            n,
            big_n,
            y,
            m,
        } => {
            let code = match suite {
                Suite::Oracle => verify::oracle(n.unwrap_or(12)),
                Suite::Weyl => verify::weyl(big_n.unwrap_or(200), y.unwrap_or(0.5)),
                Suite::Interlace => {
                    let n = big_n.unwrap_or(200);
                    verify::interlace(n, m.unwrap_or(10), y.unwrap_or(0.5))
                }
                Suite::All => {
                    if n.is_some() || big_n.is_some() || y.is_some() || m.is_some() {
                        bail!("verify all takes no parameters");
                    }
                    verify::all()
                }
            };
            return Ok(code);
        }
    }
    out.flush()?;
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code.clamp(0, 255) as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
