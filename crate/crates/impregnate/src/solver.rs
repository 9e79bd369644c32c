//! Layer-by-layer solver for the coupled transport/adsorption system.
//!
//! On the wet region `0 < rho < rho_f(tau)` the solute concentration `u` and
//! the adsorbed coverage `theta` obey
//!
//! ```text
//! (1 - rho)^2 d/dtau (u + eta theta) = -Q du/drho + d d/drho [(1 - rho)^2 du/drho]
//! d(theta)/dtau                      = kplus u (1 - theta) - kminus theta
//! ```
//!
//! with a flux-matching condition at the outer surface
//! (`d du/drho = Q (u - u0)` at `rho = 0`) and a no-gradient condition at the
//! front. Time stepping is implicit Euler on the consistent grid: every level
//! adds exactly one cell at the front.
//!
//! Space is discretised by a conservative finite volume on the cell midpoints
//! with exact cell volumes: face fluxes are first-order upwind in the advected
//! term (the flow always points inward, from smaller rho) plus a two-point
//! central difference for diffusion. Substituting the surface condition into
//! the outer face flux cancels the unknown there and leaves the constant
//! inflow `Q u0`; the front face carries no flux at all, because the pore
//! liquid moves with the front (a material surface) and the no-gradient
//! condition kills diffusion.
//!
//! The advection rate used throughout level `i` is the step average
//! `V_i / dtau_i`, the exact mean of `Q` over the step implied by the flow
//! balance `Q = (1 - rho_f)^2 d(rho_f)/d(tau)`. With that choice the time
//! integral of the inflow equals the volume wetted during the step, so a
//! uniform bath-concentration state is an exact discrete solution and the
//! solute bookkeeping telescopes exactly across levels; evaluating `Q` at the
//! end point instead would inject an O(dtau) mass defect concentrated in the
//! freshly wetted cell.
//!
//! The kinetics equation is nonlinear in `theta`, so each level is solved by
//! fixed-point iteration: update `theta` cell-wise from the previous iterate
//! of `u` (the implicit Euler step of the kinetics has a closed form), then
//! solve the tridiagonal transport system for the next iterate of `u`, until
//! both updates move less than the tolerance in the uniform norm.

use crate::error::{Error, Result};
use crate::front::FrontLaw;
use crate::grid::{build_grid_with_scale, SpaceTimeGrid};

/// Dimensionless physics parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Adsorption capacity of the pore surface relative to the liquid.
    pub eta: f64,
    /// Solute diffusivity in the pore liquid.
    pub d: f64,
    /// Adsorption rate constant.
    pub kplus: f64,
    /// Desorption rate constant.
    pub kminus: f64,
    /// Solute concentration of the bath the pellet is immersed in.
    pub u0: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            eta: 6.0,
            d: 0.1,
            kplus: 10.0,
            kminus: 0.1,
            u0: 1.0,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("eta", self.eta),
            ("d", self.d),
            ("kplus", self.kplus),
            ("kminus", self.kminus),
            ("u0", self.u0),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::Validation {
                    field: match name {
                        "eta" => "eta",
                        "d" => "d",
                        "kplus" => "kplus",
                        "kminus" => "kminus",
                        _ => "u0",
                    },
                    message: format!("must be finite and nonnegative, got {value}"),
                });
            }
        }
        Ok(())
    }
}

/// Stopping control for the per-level fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Uniform-norm tolerance on successive iterates of both unknowns.
    pub tol: f64,
    /// Iteration cap per level.
    pub max_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iters: 100,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Validation {
                field: "tol",
                message: format!("must be positive, got {}", self.tol),
            });
        }
        if self.max_iters < 1 {
            return Err(Error::Validation {
                field: "max_iters",
                message: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// Converged solution on the radial grid of one time level.
///
/// `u[j]` and `theta[j]` are the midpoint values of cell `j + 1`; a layer at
/// level `i` holds `i` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub level: usize,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
    pub iterations_used: usize,
}

impl Layer {
    /// The initial layer: one freshly wetted cell holding bath liquid with a
    /// clean pore surface. The opening time step is so short that nothing has
    /// had time to adsorb.
    pub fn first(u0: f64) -> Self {
        Self {
            level: 1,
            u: vec![u0],
            theta: vec![0.0],
            iterations_used: 0,
        }
    }
}

/// Tridiagonal linear system in the cell unknowns of one level.
///
/// `lower` and `upper` have one entry fewer than `diag`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    /// Direct elimination (Thomas algorithm). The transport matrix is
    /// strictly diagonally dominant, so no pivoting is needed.
    pub fn solve(&self) -> Vec<f64> {
        let n = self.diag.len();
        let mut c = vec![0.0; n];
        let mut x = vec![0.0; n];
        c[0] = if n > 1 {
            self.upper[0] / self.diag[0]
        } else {
            0.0
        };
        x[0] = self.rhs[0] / self.diag[0];
        for k in 1..n {
            let m = self.diag[k] - self.lower[k - 1] * c[k - 1];
            if k < n - 1 {
                c[k] = self.upper[k] / m;
            }
            x[k] = (self.rhs[k] - self.lower[k - 1] * x[k - 1]) / m;
        }
        for k in (0..n - 1).rev() {
            x[k] -= c[k] * x[k + 1];
        }
        x
    }
}

/// Closed-form implicit Euler step of the adsorption kinetics at one cell,
/// solving `theta = theta_prev + dtau [kplus u (1 - theta) - kminus theta]`.
///
/// The result lies in `[0, 1)` whenever `theta_prev` does and `u >= 0`.
pub fn theta_implicit_update(theta_prev: f64, u: f64, dtau: f64, params: &ModelParams) -> f64 {
    debug_assert!((0.0..1.0).contains(&theta_prev));
    debug_assert!(u >= 0.0 && dtau > 0.0);
    (theta_prev + dtau * params.kplus * u) / (1.0 + dtau * (params.kplus * u + params.kminus))
}

/// Assembles the transport system of one level for a frozen coverage iterate.
///
/// Cell `j` (1-based, `j = 1..=level`) balances its content change against
/// the face fluxes:
///
/// ```text
/// (V_j / dtau) [(u_j + eta theta_j) - c_j_prev] + F_j - F_{j-1} = 0
/// ```
///
/// with `F_0 = q u0` (surface inflow, exact), `F_level = 0` (material front),
/// and interior `F_m = q u_m - d (1 - rho_m)^2 (u_{m+1} - u_m) / (mid_{m+1} - mid_m)`.
/// The newly wetted cell was dry, so its previous content is zero.
pub fn assemble_u_system(
    layer_prev: &Layer,
    theta_iter: &[f64],
    grid: &SpaceTimeGrid,
    level: usize,
    params: &ModelParams,
) -> Result<TridiagonalSystem> {
    assemble_with_leak(layer_prev, theta_iter, grid, level, params, 0.0)
}

/// Assembly with an artificial advective leak through the front face,
/// `F_level = leak * q * u_level`. Used by tests to plant a conservation bug
/// that the balance check must catch; the production path passes zero.
pub(crate) fn assemble_with_leak(
    layer_prev: &Layer,
    theta_iter: &[f64],
    grid: &SpaceTimeGrid,
    level: usize,
    params: &ModelParams,
    front_leak: f64,
) -> Result<TridiagonalSystem> {
    if level < 1 || level > grid.n() {
        return Err(Error::Internal(format!(
            "level {level} outside 1..={}",
            grid.n()
        )));
    }
    if layer_prev.level + 1 != level
        || layer_prev.u.len() != level - 1
        || layer_prev.theta.len() != level - 1
    {
        return Err(Error::Internal(format!(
            "previous layer at level {} with {} cells cannot feed level {level}",
            layer_prev.level,
            layer_prev.u.len()
        )));
    }
    if theta_iter.len() != level {
        return Err(Error::Internal(format!(
            "coverage iterate has {} cells, expected {level}",
            theta_iter.len()
        )));
    }

    let faces = grid.faces();
    let mids = grid.midpoints();
    let vols = grid.volumes();
    let dtau = grid.dtau(level);
    // Step-averaged advection rate: the volume wetted this step per unit time.
    let q = vols[level - 1] / dtau;

    let n = level;
    let mut lower = vec![0.0; n - 1];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n - 1];
    let mut rhs = vec![0.0; n];

    for j in 0..n {
        let a = vols[j] / dtau;
        let c_prev = if j < n - 1 {
            layer_prev.u[j] + params.eta * layer_prev.theta[j]
        } else {
            0.0 // freshly wetted cell was dry
        };
        diag[j] += a;
        rhs[j] = a * (c_prev - params.eta * theta_iter[j]);
    }
    rhs[0] += q * params.u0;

    // Interior faces: upwind advection from the smaller-rho side, central
    // diffusion over the midpoint spacing.
    for m in 0..n - 1 {
        let diff = params.d * (1.0 - faces[m + 1]).powi(2) / (mids[m + 1] - mids[m]);
        diag[m] += q + diff;
        upper[m] = -diff;
        lower[m] = -(q + diff);
        diag[m + 1] += diff;
    }
    diag[n - 1] += front_leak * q;

    Ok(TridiagonalSystem {
        lower,
        diag,
        upper,
        rhs,
    })
}

/// Advances one level: alternate the kinetics update and the transport solve
/// until both move less than `cfg.tol` in the uniform norm.
pub fn step(
    layer_prev: &Layer,
    grid: &SpaceTimeGrid,
    level: usize,
    params: &ModelParams,
    cfg: &SolverConfig,
) -> Result<Layer> {
    step_with_leak(layer_prev, grid, level, params, cfg, 0.0)
}

pub(crate) fn step_with_leak(
    layer_prev: &Layer,
    grid: &SpaceTimeGrid,
    level: usize,
    params: &ModelParams,
    cfg: &SolverConfig,
    front_leak: f64,
) -> Result<Layer> {
    if level < 2 || level > grid.n() {
        return Err(Error::Internal(format!(
            "step level {level} outside 2..={}",
            grid.n()
        )));
    }
    let dtau = grid.dtau(level);

    // Extend the previous layer onto the new radial grid: the fresh cell
    // starts from a clean surface, and its starting guess for u copies the
    // neighbouring cell (a guess only; the converged value is
    // iteration-determined).
    let mut theta_prev = layer_prev.theta.clone();
    theta_prev.push(0.0);
    let mut u = layer_prev.u.clone();
    u.push(*layer_prev.u.last().expect("previous layer is never empty"));
    let mut theta = theta_prev.clone();

    let mut residual = f64::INFINITY;
    for k in 1..=cfg.max_iters {
        let theta_next: Vec<f64> = theta_prev
            .iter()
            .zip(&u)
            .map(|(&tp, &uj)| theta_implicit_update(tp, uj, dtau, params))
            .collect();
        let system = assemble_with_leak(layer_prev, &theta_next, grid, level, params, front_leak)?;
        let u_next = system.solve();

        let du = max_abs_diff(&u_next, &u);
        let dtheta = max_abs_diff(&theta_next, &theta);
        u = u_next;
        theta = theta_next;
        residual = du.max(dtheta);
        if du < cfg.tol && dtheta < cfg.tol {
            return Ok(Layer {
                level,
                u,
                theta,
                iterations_used: k,
            });
        }
    }
    Err(Error::NonConvergence {
        level,
        residual,
        iters: cfg.max_iters,
    })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// A completed run: the grid and one converged layer per time level.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub grid: SpaceTimeGrid,
    pub layers: Vec<Layer>,
}

impl RunOutput {
    pub fn total_iterations(&self) -> usize {
        self.layers.iter().map(|l| l.iterations_used).sum()
    }

    /// The solution at the end of filling.
    pub fn final_layer(&self) -> &Layer {
        self.layers.last().expect("a run holds at least one layer")
    }
}

/// Runs the whole filling stage: build the grid, seed the first layer with
/// bath liquid on a clean surface, then step through levels `2..=n`.
pub fn run(
    front: &dyn FrontLaw,
    params: &ModelParams,
    n: usize,
    cfg: &SolverConfig,
) -> Result<RunOutput> {
    run_with_options(front, params, n, cfg, 1.0, 0.0)
}

pub(crate) fn run_with_options(
    front: &dyn FrontLaw,
    params: &ModelParams,
    n: usize,
    cfg: &SolverConfig,
    axis_scale: f64,
    front_leak: f64,
) -> Result<RunOutput> {
    params.validate()?;
    cfg.validate()?;
    let grid = build_grid_with_scale(front, n, axis_scale)?;
    let mut layers = Vec::with_capacity(n);
    layers.push(Layer::first(params.u0));
    for level in 2..=n {
        let next = step_with_leak(
            layers.last().unwrap(),
            &grid,
            level,
            params,
            cfg,
            front_leak,
        )?;
        layers.push(next);
    }
    Ok(RunOutput { grid, layers })
}
