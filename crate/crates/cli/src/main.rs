#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::manual_is_multiple_of)]

mod commands;
mod config;
mod error;
mod grid;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rdkernel::verify::Suite;

use crate::commands::{EvalRequest, Method};
use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::grid::Range;

/// Environment variable read for the worker thread count.
const THREADS_ENV: &str = "RDKERNEL_THREADS";
const DEFAULT_TOL: f64 = 1e-15;
const DEFAULT_DENSITY: usize = 201;

#[derive(Debug, Parser)]
#[command(
    name = "rdkernel",
    version,
    about = "Evaluate and cross-check the radially deformed Fourier kernel"
)]
struct Cli {
    /// key = value file with defaults for tol, method, density, threads
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// worker threads (overrides the config file and RDKERNEL_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the kernel on a z × w grid and write CSV
    Eval {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        m: u32,
        /// min:max:count
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// min:max:count within [-1, 1]
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// auto, series or closed
        #[arg(long)]
        method: Option<String>,
        /// absolute truncation tolerance of the series (>= 1e-15)
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Report sup |K| for a = 2/n in even dimension m and write JSON
    BoundScan {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        zmax: f64,
        /// grid points per axis
        #[arg(long)]
        density: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run self-check suites: specfun, kernel, downsample, transform or all
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// replaces every check's threshold
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn configure_threads(flag: Option<usize>, config: &Config) -> CliResult<()> {
    let from_env = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(
            v.parse::<usize>()
                .map_err(|_| CliError::usage(format!("{THREADS_ENV}='{v}' is not a count")))?,
        ),
        Err(_) => None,
    };
    let threads = flag.or(config.get::<usize>("threads")?).or(from_env);
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<bool> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    configure_threads(cli.threads, &config)?;

    match cli.command {
        Command::Eval {
            a,
            m,
            z,
            w,
            method,
            tol,
            out,
        } => {
            let method = match method.or(config.get::<String>("method")?) {
                Some(s) => s.parse::<Method>()?,
                None => Method::Auto,
            };
            let req = EvalRequest {
                a,
                m,
                z: z.parse::<Range>()?,
                w: w.parse::<Range>()?,
                method,
                tol: tol.or(config.get::<f64>("tol")?).unwrap_or(DEFAULT_TOL),
            };
            let rows = commands::eval(&req, &out)?;
            println!("wrote {rows} rows to {}", out.display());
            Ok(true)
        }
        Command::BoundScan {
            n,
            m,
            zmax,
            density,
            out,
        } => {
            let density = density
                .or(config.get::<usize>("density")?)
                .unwrap_or(DEFAULT_DENSITY);
            let report = commands::bound_scan(n, m, zmax, density)?;
            commands::write_json(&report, &out)?;
            println!(
                "sup |K| = {:.17e} at z = {}, w = {}{}",
                report.sup_abs,
                report.z_at_max,
                report.w_at_max,
                match report.bound_holds {
                    Some(true) => " (bound holds)",
                    Some(false) => " (BOUND VIOLATED)",
                    None => " (no bound asserted for m >= 4)",
                }
            );
            Ok(report.bound_holds.unwrap_or(true))
        }
        Command::Verify { suite, tol, json } => {
            let suite = suite.parse::<Suite>()?;
            let tol = tol.or(config.get::<f64>("tol")?);
            let report = commands::verify(suite, tol)?;
            for c in &report.checks {
                println!(
                    "{} {:<48} residual {:.3e}  threshold {:.1e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.residual,
                    c.threshold
                );
            }
            if let Some(path) = json {
                commands::write_json(&report, &path)?;
            }
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
