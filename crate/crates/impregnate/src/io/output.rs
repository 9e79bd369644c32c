//! Run orchestration and on-disk artifacts.
//!
//! A run writes into its output directory:
//!
//! * `balance.csv` — `tau,m1,m2,rel_diff`, one row per time level;
//! * `profiles/profile_<fraction>.csv` — `rho_mid,u,theta` at the level whose
//!   front position is nearest each configured fraction of the full depth;
//! * `summary.txt` — echoed parameters and run statistics;
//! * `grid.csv` — `i,tau,rho_face,rho_mid,volume` (only with `dump_grid`);
//! * `balance.svg` / `profiles.svg` (only with `svg`).
//!
//! Floating-point columns carry 17 significant digits, enough to reproduce
//! the binary doubles exactly, and runs are deterministic, so identical
//! configurations produce byte-identical files.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use crate::balance::{verify_balance, BalanceSeries};
use crate::error::Result;
use crate::grid::SpaceTimeGrid;
use crate::io::config::RunConfig;
use crate::io::svg::render_svg;
use crate::solver::{run_with_options, Layer, RunOutput};

/// Extra artifact switches of the `run` subcommand.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExecuteOptions {
    pub dump_grid: bool,
    pub svg: bool,
}

/// What a completed execution produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub pass: bool,
    pub max_rel_diff: f64,
    pub total_iterations: usize,
    pub wall_seconds: f64,
    pub path_length: f64,
    pub tau_end: f64,
    pub written: Vec<PathBuf>,
}

/// Formats a double with 17 significant digits (a faithful round-trip).
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Runs the configured case and writes all artifacts.
pub fn execute(config: &RunConfig, opts: &ExecuteOptions) -> Result<RunReport> {
    config.validate()?;
    let front = config.front()?;
    let started = Instant::now();
    let output = run_with_options(
        &front,
        &config.model_params(),
        config.n,
        &config.solver_config(),
        config.axis_scale,
        0.0,
    )?;
    let series = verify_balance(
        &output.layers,
        &output.grid,
        &front,
        &config.model_params(),
        config.balance_threshold,
    )?;
    let wall_seconds = started.elapsed().as_secs_f64();

    let dir = &config.output_dir;
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let balance_path = dir.join("balance.csv");
    write_balance_csv(&balance_path, &series)?;
    written.push(balance_path);

    let profile_dir = dir.join("profiles");
    fs::create_dir_all(&profile_dir)?;
    for &fraction in &config.profile_fractions {
        let level = level_nearest_fraction(&output.grid, fraction);
        let path = profile_dir.join(format!("profile_{fraction}.csv"));
        write_profile_csv(&path, &output.grid, &output.layers[level - 1])?;
        written.push(path);
    }

    if opts.dump_grid {
        let grid_path = dir.join("grid.csv");
        write_grid_csv(&grid_path, &output.grid)?;
        written.push(grid_path);
    }

    let summary_path = dir.join("summary.txt");
    write_summary(&summary_path, config, &output, &series, wall_seconds)?;
    written.push(summary_path);

    if opts.svg {
        written.extend(render_svg(dir)?);
    }

    Ok(RunReport {
        pass: series.pass,
        max_rel_diff: series.max_rel_diff,
        total_iterations: output.total_iterations(),
        wall_seconds,
        path_length: output.grid.path_length(),
        tau_end: *output.grid.times().last().unwrap(),
        written,
    })
}

/// Runs the configured case and reports only the bookkeeping verdict.
pub fn check(config: &RunConfig) -> Result<BalanceSeries> {
    config.validate()?;
    let front = config.front()?;
    let output = run_with_options(
        &front,
        &config.model_params(),
        config.n,
        &config.solver_config(),
        config.axis_scale,
        0.0,
    )?;
    verify_balance(
        &output.layers,
        &output.grid,
        &front,
        &config.model_params(),
        config.balance_threshold,
    )
}

/// The level whose front position is nearest `fraction` of the full depth.
fn level_nearest_fraction(grid: &SpaceTimeGrid, fraction: f64) -> usize {
    let target = fraction * grid.faces().last().unwrap();
    let mut best = 1;
    let mut best_dist = f64::INFINITY;
    for i in 1..=grid.n() {
        let dist = (grid.faces()[i] - target).abs();
        if dist < best_dist {
            best_dist = dist;
            best = i;
        }
    }
    best
}

fn write_balance_csv(path: &std::path::Path, series: &BalanceSeries) -> Result<()> {
    let mut out = String::from("tau,m1,m2,rel_diff\n");
    for row in &series.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt17(row.tau),
            fmt17(row.m1),
            fmt17(row.m2),
            fmt17(row.rel_diff)
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

fn write_profile_csv(path: &std::path::Path, grid: &SpaceTimeGrid, layer: &Layer) -> Result<()> {
    let mut out = String::from("rho_mid,u,theta\n");
    for j in 0..layer.u.len() {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt17(grid.midpoints()[j]),
            fmt17(layer.u[j]),
            fmt17(layer.theta[j])
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

fn write_grid_csv(path: &std::path::Path, grid: &SpaceTimeGrid) -> Result<()> {
    let mut out = String::from("i,tau,rho_face,rho_mid,volume\n");
    for i in 1..=grid.n() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            i,
            fmt17(grid.times()[i]),
            fmt17(grid.faces()[i]),
            fmt17(grid.midpoints()[i - 1]),
            fmt17(grid.volumes()[i - 1])
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

fn write_summary(
    path: &std::path::Path,
    config: &RunConfig,
    output: &RunOutput,
    series: &BalanceSeries,
    wall_seconds: f64,
) -> Result<()> {
    let mut f = fs::File::create(path)?;
    writeln!(f, "parameters:")?;
    for line in config.serialize().lines() {
        writeln!(f, "  {line}")?;
    }
    writeln!(f, "grid:")?;
    writeln!(f, "  levels = {}", output.grid.n())?;
    writeln!(f, "  path_length = {}", output.grid.path_length())?;
    writeln!(f, "  tau_end = {}", output.grid.times().last().unwrap())?;
    writeln!(f, "run:")?;
    writeln!(f, "  total_iterations = {}", output.total_iterations())?;
    writeln!(f, "  max_rel_diff = {:e}", series.max_rel_diff)?;
    writeln!(
        f,
        "  balance = {}",
        if series.pass { "PASS" } else { "FAIL" }
    )?;
    writeln!(f, "  wall_seconds = {wall_seconds:.3}")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_levels_track_front_fractions() {
        let front = crate::front::ConstantPcFront::new(5.0).unwrap();
        let grid = crate::grid::build_grid(&front, 100).unwrap();
        let full = level_nearest_fraction(&grid, 1.0);
        assert_eq!(full, 100);
        let half = level_nearest_fraction(&grid, 0.5);
        assert!((grid.faces()[half] - 0.5).abs() < 0.01);
    }

    #[test]
    fn seventeen_digit_format_roundtrips() {
        for x in [1.0 / 3.0, 1e-30, 0.1 + 0.2, 6.02e23] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }
}
