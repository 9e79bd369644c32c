//! Consistent space-time grid built from the front path.
//!
//! The path of the front in the `(tau, rho)` plane runs from `(0, 0)` to the
//! terminal point `(tau_e, rho_e)`. Splitting that curve into `n` arcs of
//! equal length yields nodes `(tau_i, rho_i)` that serve simultaneously as
//! the time grid and as the radial cell faces: at level `i` the wet region
//! holds exactly `i` cells, and each time step wets exactly one new cell.
//!
//! Cell volumes are the exact integrals of the spherical weight `(1 - rho)^2`
//! over each cell, so the discrete bookkeeping of solute mass telescopes
//! without quadrature error.

use crate::error::{Error, Result};
use crate::front::FrontLaw;

/// Sampling density of the cumulative arc-length table when built standalone.
const ARC_SAMPLES_DEFAULT: usize = 100_000;

/// Minimum sampling density used by [`build_grid`] (`10 n` above this size).
const ARC_SAMPLES_FLOOR: usize = 10_000;

/// The coupled time/space grid of one run.
///
/// For a grid of size `n`: `times` and `faces` have `n + 1` entries
/// (`times[0] = 0`, `faces[0] = 0`), `midpoints` and `volumes` have `n`
/// entries indexed by cell `j - 1` for cells `j = 1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeGrid {
    times: Vec<f64>,
    faces: Vec<f64>,
    midpoints: Vec<f64>,
    volumes: Vec<f64>,
    path_length: f64,
}

impl SpaceTimeGrid {
    /// Assembles a grid from explicit nodes. `times` and `faces` must be
    /// strictly increasing, equally long, and start at the initial point.
    ///
    /// The stored path length is the chord length of the node polyline.
    pub fn from_nodes(times: Vec<f64>, faces: Vec<f64>) -> Result<Self> {
        if times.len() != faces.len() || times.len() < 2 {
            return Err(Error::Internal(format!(
                "node arrays must have equal length >= 2, got {} and {}",
                times.len(),
                faces.len()
            )));
        }
        if faces[0] < 0.0 || times[0] < 0.0 {
            return Err(Error::Internal(
                "grid nodes must start at nonnegative coordinates".into(),
            ));
        }
        for k in 1..times.len() {
            if times[k] <= times[k - 1] || faces[k] <= faces[k - 1] {
                return Err(Error::InvalidFront { rho: faces[k] });
            }
        }
        let midpoints: Vec<f64> = faces.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let volumes: Vec<f64> = faces
            .windows(2)
            .map(|w| ((1.0 - w[0]).powi(3) - (1.0 - w[1]).powi(3)) / 3.0)
            .collect();
        let path_length = times
            .windows(2)
            .zip(faces.windows(2))
            .map(|(t, r)| ((t[1] - t[0]).powi(2) + (r[1] - r[0]).powi(2)).sqrt())
            .sum();
        Ok(Self {
            times,
            faces,
            midpoints,
            volumes,
            path_length,
        })
    }

    /// Number of cells at the final level (equals the number of time steps).
    pub fn n(&self) -> usize {
        self.volumes.len()
    }

    /// Time levels `tau_0 = 0, tau_1, ..., tau_n = tau_e`.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Cell faces `rho_0 = 0, rho_1, ..., rho_n = rho_e`.
    pub fn faces(&self) -> &[f64] {
        &self.faces
    }

    /// Cell midpoints, entry `j - 1` for cell `j`.
    pub fn midpoints(&self) -> &[f64] {
        &self.midpoints
    }

    /// Exact cell volumes `[(1 - rho_{j-1})^3 - (1 - rho_j)^3] / 3`.
    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    /// Arc length of the front path this grid divides.
    pub fn path_length(&self) -> f64 {
        self.path_length
    }

    /// Time step of level `i`, for `i = 1..=n`.
    pub fn dtau(&self, level: usize) -> f64 {
        self.times[level] - self.times[level - 1]
    }
}

/// Cumulative chord-length table of the front path, sampled uniformly in rho.
/// Returns `(rho_samples, cumulative_length)`.
fn arc_table(
    front: &dyn FrontLaw,
    samples: usize,
    axis_scale: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (_, rho_end) = front.terminal();
    let mut rho = Vec::with_capacity(samples + 1);
    let mut cum = Vec::with_capacity(samples + 1);
    let mut prev_tau = 0.0_f64;
    let mut prev_rho = 0.0_f64;
    let mut total = 0.0_f64;
    rho.push(0.0);
    cum.push(0.0);
    for k in 1..=samples {
        let r = rho_end * k as f64 / samples as f64;
        let t = front.tau_of_rho(r)?;
        if t <= prev_tau {
            return Err(Error::InvalidFront { rho: r });
        }
        let dt = axis_scale * (t - prev_tau);
        let dr = r - prev_rho;
        total += (dt * dt + dr * dr).sqrt();
        rho.push(r);
        cum.push(total);
        prev_tau = t;
        prev_rho = r;
    }
    Ok((rho, cum))
}

/// Arc length of the front path in the raw `(tau, rho)` plane.
pub fn path_arc_length(front: &dyn FrontLaw) -> Result<f64> {
    path_arc_length_with_scale(front, 1.0)
}

/// Arc length with the time axis weighted by `axis_scale` before measuring,
/// `ds^2 = d(rho)^2 + (axis_scale * d(tau))^2`.
pub fn path_arc_length_with_scale(front: &dyn FrontLaw, axis_scale: f64) -> Result<f64> {
    let (_, cum) = arc_table(front, ARC_SAMPLES_DEFAULT, axis_scale)?;
    Ok(*cum.last().unwrap())
}

/// Builds the consistent grid by dividing the front path into `n` arcs of
/// equal length. See [`build_grid_with_scale`].
pub fn build_grid(front: &dyn FrontLaw, n: usize) -> Result<SpaceTimeGrid> {
    build_grid_with_scale(front, n, 1.0)
}

/// Builds the consistent grid with the time axis weighted by `axis_scale`
/// when measuring arc length.
///
/// Interior faces come from inverting the cumulative arc-length table by
/// piecewise-linear interpolation; the matching times are then recomputed
/// through the front law itself, so every node lies exactly on the front
/// path. Endpoints are pinned to `(0, 0)` and the terminal point.
pub fn build_grid_with_scale(
    front: &dyn FrontLaw,
    n: usize,
    axis_scale: f64,
) -> Result<SpaceTimeGrid> {
    if n < 2 {
        return Err(Error::GridSize(n));
    }
    if !(axis_scale.is_finite() && axis_scale > 0.0) {
        return Err(Error::Validation {
            field: "axis_scale",
            message: format!("must be a positive finite number, got {axis_scale}"),
        });
    }
    let samples = (10 * n).max(ARC_SAMPLES_FLOOR);
    let (rho_s, cum) = arc_table(front, samples, axis_scale)?;
    let total = *cum.last().unwrap();

    let (tau_end, rho_end) = front.terminal();
    let mut faces = Vec::with_capacity(n + 1);
    faces.push(0.0);
    for i in 1..n {
        let target = total * i as f64 / n as f64;
        let hi = cum.partition_point(|&c| c < target).max(1);
        let lo = hi - 1;
        let w = (target - cum[lo]) / (cum[hi] - cum[lo]);
        faces.push(rho_s[lo] + w * (rho_s[hi] - rho_s[lo]));
    }
    faces.push(rho_end);

    let mut times = Vec::with_capacity(n + 1);
    times.push(0.0);
    for &r in faces.iter().take(n).skip(1) {
        times.push(front.tau_of_rho(r)?);
    }
    times.push(tau_end);

    let grid = SpaceTimeGrid::from_nodes(times, faces)?;
    // from_nodes recomputes a chord length over only n segments; keep the
    // dense-table value, which is what the equal-arc division used.
    Ok(SpaceTimeGrid {
        path_length: total,
        ..grid
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::front::ConstantPcFront;
    use crate::testutil::{kahan_sum, LinearFront};
    use approx::assert_relative_eq;

    fn front() -> ConstantPcFront {
        ConstantPcFront::new(5.0).unwrap()
    }

    /// Quadrature oracle: trapezoid of the arc-length integrand
    /// sqrt(1 + (rho (1 - rho) / sigma)^2) on a fine uniform grid.
    fn arc_length_oracle(sigma: f64, samples: usize) -> f64 {
        let f = |r: f64| (1.0 + (r * (1.0 - r) / sigma).powi(2)).sqrt();
        let h = 1.0 / samples as f64;
        let mut s = 0.5 * (f(0.0) + f(1.0));
        for k in 1..samples {
            s += f(k as f64 * h);
        }
        s * h
    }

    /// Cumulative oracle arc length from 0 to `rho` on the same integrand.
    fn arc_to_oracle(sigma: f64, rho: f64, samples: usize) -> f64 {
        let f = |r: f64| (1.0 + (r * (1.0 - r) / sigma).powi(2)).sqrt();
        let h = rho / samples as f64;
        if h == 0.0 {
            return 0.0;
        }
        let mut s = 0.5 * (f(0.0) + f(rho));
        for k in 1..samples {
            s += f(k as f64 * h);
        }
        s * h
    }

    #[test]
    fn arc_length_constant_pc_matches_oracle() {
        let length = path_arc_length(&front()).unwrap();
        let oracle = arc_length_oracle(5.0, 1_000_000);
        assert_relative_eq!(length, oracle, max_relative = 1e-6);
        // Frozen from the 1e6-sample oracle.
        assert_relative_eq!(length, 1.000_666_35, epsilon = 1e-6);
    }

    #[test]
    fn arc_length_straight_line() {
        let length = path_arc_length(&LinearFront::new(1.0 / 30.0)).unwrap();
        assert_relative_eq!(length, (1.0_f64 + 1.0 / 900.0).sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn arc_length_collapses_onto_rho_axis_for_large_sigma() {
        let length = path_arc_length(&ConstantPcFront::new(1e9).unwrap()).unwrap();
        assert!((length - 1.0).abs() <= 1e-10, "length = {length}");
    }

    #[test]
    fn two_cell_grid_splits_symmetric_path_in_half() {
        // The integrand is symmetric about rho = 0.5, so the half-length
        // point sits at 0.5 to table resolution.
        let grid = build_grid(&front(), 2).unwrap();
        assert!((grid.faces()[1] - 0.5).abs() <= 1e-3);
    }

    #[test]
    fn straight_line_grid_is_uniform() {
        let n = 17;
        let tau_end = 1.0 / 30.0;
        let grid = build_grid(&LinearFront::new(tau_end), n).unwrap();
        for i in 0..=n {
            assert_relative_eq!(grid.faces()[i], i as f64 / n as f64, epsilon = 1e-12);
            assert_relative_eq!(
                grid.times()[i],
                tau_end * i as f64 / n as f64,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn first_node_of_fine_grid_is_tiny() {
        let f = front();
        let grid = build_grid(&f, 1000).unwrap();
        let tau_1 = grid.times()[1];
        assert!(tau_1 < 1e-6, "tau_1 = {tau_1}");
        assert_relative_eq!(
            tau_1,
            f.tau_of_rho(grid.faces()[1]).unwrap(),
            max_relative = 1e-12
        );
        // rho_1 is close to L/n since the integrand is ~1 near the surface.
        assert_relative_eq!(
            grid.faces()[1],
            grid.path_length() / 1000.0,
            max_relative = 1e-4
        );
    }

    #[test]
    fn nodes_divide_the_path_into_equal_arcs() {
        let grid = build_grid(&front(), 500).unwrap();
        let length = grid.path_length();
        let n = grid.n();
        let mut worst = 0.0_f64;
        for (i, &rho) in grid.faces().iter().enumerate() {
            let s = arc_to_oracle(5.0, rho, 20_000);
            worst = worst.max((s - length * i as f64 / n as f64).abs());
        }
        assert!(worst <= 1e-6 * length, "worst arc deviation {worst:.3e}");
    }

    #[test]
    fn grid_monotone_with_positive_volumes() {
        let grid = build_grid(&front(), 1000).unwrap();
        for i in 1..=grid.n() {
            assert!(grid.times()[i] > grid.times()[i - 1]);
            assert!(grid.faces()[i] > grid.faces()[i - 1]);
            let mid = grid.midpoints()[i - 1];
            assert!(grid.faces()[i - 1] < mid && mid < grid.faces()[i]);
            assert!(grid.volumes()[i - 1] > 0.0);
        }
    }

    #[test]
    fn volumes_telescope_to_wetted_volume() {
        let grid = build_grid(&front(), 1000).unwrap();
        let total = kahan_sum(grid.volumes());
        assert!((total - 1.0 / 3.0).abs() <= 1e-14);
    }

    #[test]
    fn refinement_roughly_halves_steps() {
        let max_steps = |n: usize| {
            let g = build_grid(&front(), n).unwrap();
            let dt = g
                .times()
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(0.0_f64, f64::max);
            let dr = g
                .faces()
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(0.0_f64, f64::max);
            (dt, dr)
        };
        let (dt_250, dr_250) = max_steps(250);
        let (dt_500, dr_500) = max_steps(500);
        assert!((1.7..2.3).contains(&(dt_250 / dt_500)));
        assert!((1.7..2.3).contains(&(dr_250 / dr_500)));
    }

    #[test]
    fn rejects_degenerate_sizes() {
        assert!(matches!(build_grid(&front(), 0), Err(Error::GridSize(0))));
        assert!(matches!(build_grid(&front(), 1), Err(Error::GridSize(1))));
    }

    #[test]
    fn rejects_non_monotone_front() {
        struct Dip;
        impl FrontLaw for Dip {
            fn terminal(&self) -> (f64, f64) {
                (1.0, 1.0)
            }
            fn tau_of_rho(&self, rho_f: f64) -> Result<f64> {
                // Not monotone: folds back past rho = 0.8.
                Ok(if rho_f < 0.8 { rho_f } else { 1.6 - rho_f })
            }
        }
        assert!(matches!(
            build_grid(&Dip, 10),
            Err(Error::InvalidFront { .. })
        ));
    }

    #[test]
    fn axis_scale_changes_the_division() {
        // Weighting the time axis up concentrates arc length mid-path, where
        // the front spends most of its time, so the first radial step widens.
        let plain = build_grid(&front(), 10).unwrap();
        let scaled = build_grid_with_scale(&front(), 10, 30.0).unwrap();
        assert!(scaled.faces()[1] > plain.faces()[1]);
        let total_plain = plain.path_length();
        let total_scaled = scaled.path_length();
        assert!(total_scaled > total_plain);
    }

    #[test]
    fn from_nodes_rejects_bad_shapes() {
        assert!(SpaceTimeGrid::from_nodes(vec![0.0, 1.0], vec![0.0]).is_err());
        assert!(SpaceTimeGrid::from_nodes(vec![0.0, 1.0, 0.5], vec![0.0, 0.4, 0.6]).is_err());
        assert!(SpaceTimeGrid::from_nodes(vec![0.0, 1.0], vec![0.0, 0.0]).is_err());
    }
}
