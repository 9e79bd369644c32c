//! Solute bookkeeping: cumulative inflow versus content held in the pellet.
//!
//! For a correct solution the solute that entered through the outer surface
//! up to time `tau` (`m1`, the time integral of `Q u0`) must equal the solute
//! dissolved in the pore liquid plus adsorbed on the pore surface (`m2`, the
//! volume integral of `u + eta theta` over the wet region). Comparing the two
//! at every level is a sharp end-to-end check of the scheme: `m2` uses the
//! solver's own cell volumes and midpoint values, so any discrepancy is
//! attributable to the transport discretisation, not to post-processing
//! quadrature.

use crate::error::{Error, Result};
use crate::front::FrontLaw;
use crate::grid::SpaceTimeGrid;
use crate::solver::{Layer, ModelParams};

/// Guard for the relative-difference denominator when no solute has entered.
const REL_DIFF_FLOOR: f64 = 1e-30;

/// One time level of the bookkeeping comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceRow {
    pub tau: f64,
    pub m1: f64,
    pub m2: f64,
    pub rel_diff: f64,
}

/// The per-level comparison across a whole run.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceSeries {
    pub rows: Vec<BalanceRow>,
    pub max_rel_diff: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Cumulative solute inflow through the outer surface up to `tau`.
///
/// The flow balance `Q = (1 - rho_f)^2 d(rho_f)/d(tau)` makes the integral of
/// `Q` exactly the volume wetted so far, so the inflow has the closed form
/// `u0 [1 - (1 - rho_f(tau))^3] / 3` for every conforming front law.
pub fn m1_inflow(front: &dyn FrontLaw, tau: f64, u0: f64) -> Result<f64> {
    let rho = front.rho_of_tau(tau)?;
    Ok(u0 * (1.0 - (1.0 - rho).powi(3)) / 3.0)
}

/// Cumulative inflow by quadrature of the rate over an explicit time grid,
/// for laws whose rate does not integrate in closed form. Returns one value
/// per node of `times` (the first entry is zero).
///
/// The rate may blow up at `times[0]` (a front starting at the surface has
/// `Q -> infinity`), so the opening interval uses the midpoint value; the
/// remaining intervals use the trapezoid rule.
pub fn m1_inflow_quadrature(front: &dyn FrontLaw, times: &[f64], u0: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(times.len());
    out.push(0.0);
    if times.len() < 2 {
        return Ok(out);
    }
    let q1 = front.q_of_tau(0.5 * (times[0] + times[1]))?;
    out.push((times[1] - times[0]) * q1 * u0);
    let mut q_prev = front.q_of_tau(times[1])?;
    for w in times.windows(2).skip(1) {
        let q_next = front.q_of_tau(w[1])?;
        let inc = 0.5 * (w[1] - w[0]) * (q_prev + q_next) * u0;
        out.push(out.last().unwrap() + inc);
        q_prev = q_next;
    }
    Ok(out)
}

/// Solute content of one layer: midpoint values weighted by exact volumes,
/// `sum_j V_j (u_j + eta theta_j)`.
pub fn m2_content(layer: &Layer, grid: &SpaceTimeGrid, params: &ModelParams) -> f64 {
    layer
        .u
        .iter()
        .zip(&layer.theta)
        .zip(grid.volumes())
        .map(|((&u, &th), &v)| v * (u + params.eta * th))
        .sum()
}

/// Compares inflow against content at every level of a completed run.
///
/// `rel_diff` is `|m1 - m2| / max(m1, floor)` per level; the run passes when
/// the largest value stays at or below `threshold`.
pub fn verify_balance(
    layers: &[Layer],
    grid: &SpaceTimeGrid,
    front: &dyn FrontLaw,
    params: &ModelParams,
    threshold: f64,
) -> Result<BalanceSeries> {
    let mut rows = Vec::with_capacity(layers.len());
    let mut max_rel_diff = 0.0_f64;
    for layer in layers {
        if layer.level > grid.n() {
            return Err(Error::Internal(format!(
                "layer level {} beyond grid size {}",
                layer.level,
                grid.n()
            )));
        }
        let tau = grid.times()[layer.level];
        let m1 = m1_inflow(front, tau, params.u0)?;
        let m2 = m2_content(layer, grid, params);
        let rel_diff = (m1 - m2).abs() / m1.max(REL_DIFF_FLOOR);
        max_rel_diff = max_rel_diff.max(rel_diff);
        rows.push(BalanceRow {
            tau,
            m1,
            m2,
            rel_diff,
        });
    }
    Ok(BalanceSeries {
        rows,
        max_rel_diff,
        threshold,
        pass: max_rel_diff <= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front::ConstantPcFront;
    use crate::grid::build_grid;
    use crate::solver::{run, run_with_options, SolverConfig};
    use approx::assert_relative_eq;

    fn front() -> ConstantPcFront {
        ConstantPcFront::new(5.0).unwrap()
    }

    fn reference_params(kplus: f64) -> ModelParams {
        ModelParams {
            eta: 6.0,
            d: 0.1,
            kplus,
            kminus: 0.1,
            u0: 1.0,
        }
    }

    #[test]
    fn inflow_closed_form_values() {
        let f = front();
        assert_eq!(m1_inflow(&f, 0.0, 1.0).unwrap(), 0.0);
        assert_relative_eq!(
            m1_inflow(&f, 1.0 / 30.0, 1.0).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-12
        );
        // Front at rho = 0.5: [1 - 0.5^3] / 3.
        assert_relative_eq!(
            m1_inflow(&f, 1.0 / 60.0, 1.0).unwrap(),
            0.875 / 3.0,
            epsilon = 1e-10
        );
        assert!(m1_inflow(&f, -0.1, 1.0).is_err());
        assert!(m1_inflow(&f, 1.0, 1.0).is_err());
    }

    #[test]
    fn content_of_uniform_layers() {
        let grid = build_grid(&front(), 100).unwrap();
        let p = reference_params(10.0);
        let full = Layer {
            level: 100,
            u: vec![1.0; 100],
            theta: vec![0.0; 100],
            iterations_used: 1,
        };
        assert_relative_eq!(m2_content(&full, &grid, &p), 1.0 / 3.0, epsilon = 1e-12);
        let empty = Layer {
            level: 100,
            u: vec![0.0; 100],
            theta: vec![0.0; 100],
            iterations_used: 1,
        };
        assert_eq!(m2_content(&empty, &grid, &p), 0.0);
        // Single wetted cell: exactly its volume.
        let one = Layer::first(1.0);
        assert_relative_eq!(
            m2_content(&one, &grid, &p),
            grid.volumes()[0],
            max_relative = 1e-15
        );
    }

    #[test]
    fn pure_fill_balances_to_roundoff() {
        let p = ModelParams {
            kplus: 0.0,
            kminus: 0.0,
            ..reference_params(0.0)
        };
        let out = run(&front(), &p, 300, &SolverConfig::default()).unwrap();
        let series = verify_balance(&out.layers, &out.grid, &front(), &p, 1e-2).unwrap();
        assert!(series.pass);
        assert!(
            series.max_rel_diff <= 1e-8,
            "max rel diff {:.3e}",
            series.max_rel_diff
        );
    }

    #[test]
    fn reference_runs_balance_within_threshold() {
        for kplus in [10.0, 100.0] {
            let p = reference_params(kplus);
            let out = run(&front(), &p, 300, &SolverConfig::default()).unwrap();
            let series = verify_balance(&out.layers, &out.grid, &front(), &p, 1e-2).unwrap();
            assert!(series.pass, "kplus = {kplus}");
            // Inflow and content are monotone while the bath feeds the pellet.
            for w in series.rows.windows(2) {
                assert!(w[1].m1 >= w[0].m1);
                assert!(w[1].m2 >= w[0].m2 - 1e-12);
            }
        }
    }

    #[test]
    fn planted_front_leak_is_detected() {
        let p = reference_params(10.0);
        let out = run_with_options(&front(), &p, 300, &SolverConfig::default(), 1.0, 0.05).unwrap();
        let series = verify_balance(&out.layers, &out.grid, &front(), &p, 1e-2).unwrap();
        assert!(
            !series.pass,
            "leak went undetected, max rel diff {:.3e}",
            series.max_rel_diff
        );
    }

    #[test]
    fn quadrature_route_tracks_closed_form() {
        let f = front();
        let grid = build_grid(&f, 1000).unwrap();
        let quad = m1_inflow_quadrature(&f, grid.times(), 1.0).unwrap();
        let total = m1_inflow(&f, *grid.times().last().unwrap(), 1.0).unwrap();
        let mut worst = 0.0_f64;
        for (i, &q) in quad.iter().enumerate() {
            let exact = m1_inflow(&f, grid.times()[i], 1.0).unwrap();
            worst = worst.max((q - exact).abs());
        }
        assert!(
            worst <= 1e-3 * total,
            "quadrature deviates by {worst:.3e} of {total:.3e}"
        );
    }
}
