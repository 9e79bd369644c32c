//! Command-line front end.
//!
//! ```text
//! impregnate run   [--config <path>] [--<key> <value> ...] [--dump-grid] [--svg]
//! impregnate check [--config <path>] [--<key> <value> ...]
//! ```
//!
//! Exit codes: 0 balance PASS, 1 balance FAIL, 2 solver non-convergence,
//! 3 filesystem failure, 4 invalid configuration.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use impregnate::io::{check, execute, parse_config, ExecuteOptions};
use impregnate::Error;

#[derive(Parser)]
#[command(
    name = "impregnate",
    version,
    about = "Simulates solute uptake in a pellet filling by capillary imbibition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a case and write CSV artifacts (and optionally SVG plots).
    Run {
        #[command(flatten)]
        common: CommonArgs,
        /// Also write grid.csv with the space-time grid.
        #[arg(long = "dump-grid")]
        dump_grid: bool,
        /// Also render balance.svg and profiles.svg.
        #[arg(long)]
        svg: bool,
    },
    /// Run a case and report only PASS/FAIL of the mass-balance check.
    Check {
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// Config file plus per-key overrides; a flag set here wins over the file.
#[derive(Args)]
struct CommonArgs {
    /// Path to a `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    kplus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    kminus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    u0: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[arg(long = "max_iters", alias = "max-iters")]
    max_iters: Option<usize>,
    #[arg(
        long = "balance_threshold",
        alias = "balance-threshold",
        allow_negative_numbers = true
    )]
    balance_threshold: Option<f64>,
    #[arg(
        long = "axis_scale",
        alias = "axis-scale",
        allow_negative_numbers = true
    )]
    axis_scale: Option<f64>,
    /// Comma-separated front-position fractions for profile dumps.
    #[arg(long = "profile_fractions", alias = "profile-fractions")]
    profile_fractions: Option<String>,
    #[arg(long = "output_dir", alias = "output-dir")]
    output_dir: Option<PathBuf>,
}

impl CommonArgs {
    fn overrides(&self) -> Vec<(String, String)> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        let mut push = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                pairs.push((key.to_string(), v));
            }
        };
        push("sigma", self.sigma.map(|v| v.to_string()));
        push("eta", self.eta.map(|v| v.to_string()));
        push("d", self.d.map(|v| v.to_string()));
        push("kplus", self.kplus.map(|v| v.to_string()));
        push("kminus", self.kminus.map(|v| v.to_string()));
        push("u0", self.u0.map(|v| v.to_string()));
        push("n", self.n.map(|v| v.to_string()));
        push("tol", self.tol.map(|v| v.to_string()));
        push("max_iters", self.max_iters.map(|v| v.to_string()));
        push(
            "balance_threshold",
            self.balance_threshold.map(|v| v.to_string()),
        );
        push("axis_scale", self.axis_scale.map(|v| v.to_string()));
        push("profile_fractions", self.profile_fractions.clone());
        push(
            "output_dir",
            self.output_dir.as_ref().map(|p| p.display().to_string()),
        );
        pairs
    }

    fn load(&self) -> Result<impregnate::RunConfig, Error> {
        let contents = match &self.config {
            Some(path) => std::fs::read_to_string(path)?,
            None => String::new(),
        };
        parse_config(&contents, &self.overrides())
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NonConvergence { .. } => 2,
        Error::Io(_) | Error::MissingArtifact(_) => 3,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run {
            common,
            dump_grid,
            svg,
        } => common.load().and_then(|config| {
            let opts = ExecuteOptions {
                dump_grid: *dump_grid,
                svg: *svg,
            };
            let report = execute(&config, &opts)?;
            println!(
                "levels = {}, total iterations = {}, path length = {:.9}, tau_end = {:.9}",
                config.n, report.total_iterations, report.path_length, report.tau_end
            );
            println!(
                "balance {}: max rel diff = {:.3e} (threshold {:.1e})",
                if report.pass { "PASS" } else { "FAIL" },
                report.max_rel_diff,
                config.balance_threshold
            );
            println!("artifacts in {}", config.output_dir.display());
            Ok(report.pass)
        }),
        Command::Check { common } => common.load().and_then(|config| {
            let series = check(&config)?;
            println!(
                "balance {}: max rel diff = {:.3e} (threshold {:.1e})",
                if series.pass { "PASS" } else { "FAIL" },
                series.max_rel_diff,
                series.threshold
            );
            Ok(series.pass)
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
