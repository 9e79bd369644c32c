//! Solver for solute transport and adsorption in a spherical porous pellet
//! while capillary action draws liquid in from the surface.
//!
//! The wet region grows inward behind a liquid front whose trajectory is
//! prescribed by a [`front::FrontLaw`]; a two-phase convection-reaction-
//! diffusion system for the dissolved concentration and the adsorbed coverage
//! is then solved on that moving domain. The trick that keeps the moving
//! boundary painless is the consistent grid of [`grid`]: time levels and
//! radial cell faces both come from splitting the front path into arcs of
//! equal length, so each implicit Euler step wets exactly one new cell.
//!
//! * [`front`] — front trajectories and the induced imbibition rate; the
//!   constant-capillary-pressure model ships, anything monotone plugs in.
//! * [`grid`] — the equal-arc space-time grid and exact cell volumes.
//! * [`solver`] — conservative finite-volume transport, closed-form implicit
//!   kinetics, and the per-level fixed-point iteration between them.
//! * [`balance`] — the inflow-versus-content bookkeeping check.
//! * [`io`] — `key = value` configs, CSV/SVG artifacts, run orchestration.

pub mod balance;
pub mod error;
pub mod front;
pub mod grid;
pub mod io;
pub mod solver;

#[cfg(test)]
pub(crate) mod testutil;

pub use balance::{m1_inflow, m1_inflow_quadrature, m2_content, verify_balance, BalanceSeries};
pub use error::{Error, Result};
pub use front::{ConstantPcFront, FrontLaw};
pub use grid::{build_grid, build_grid_with_scale, path_arc_length, SpaceTimeGrid};
pub use io::{check, execute, parse_config, render_svg, ExecuteOptions, RunConfig, RunReport};
pub use solver::{
    assemble_u_system, run, step, theta_implicit_update, Layer, ModelParams, RunOutput,
    SolverConfig, TridiagonalSystem,
};
