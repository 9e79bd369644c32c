//! Front laws: the prescribed trajectory of the liquid front.
//!
//! The wet region of the pellet is `0 <= rho <= rho_f(tau)`, where `rho` is the
//! inverted radial coordinate (`rho = 0` at the outer surface, `rho = 1` at the
//! centre) and `rho_f` grows monotonically from 0 as the liquid soaks in. The
//! volumetric imbibition rate is tied to the front speed by the flow balance
//!
//! ```text
//! Q(tau) = (1 - rho_f)^2 * d(rho_f)/d(tau)
//! ```
//!
//! [`FrontLaw`] abstracts over any monotone trajectory; [`ConstantPcFront`] is
//! the constant-capillary-pressure model, for which the trajectory has the
//! closed form `tau = (3 rho_f^2 - 2 rho_f^3) / (6 sigma)` and the rate is
//! `Q = sigma (1 - rho_f) / rho_f`.

use crate::error::{Error, Result};

/// Relative slack past the terminal time tolerated before `rho_of_tau` rejects
/// its argument, so that a terminal time reconstructed elsewhere in floating
/// point still inverts cleanly.
const TAU_END_SLACK: f64 = 1e-12;

/// Radial step for the finite-difference fallback of [`FrontLaw::q_of_rho`].
const Q_FD_STEP: f64 = 1e-6;

/// A monotone law of motion for the liquid front.
///
/// `tau_of_rho` is the required primitive: trajectories of interest come out
/// of hydrodynamics as time-of-arrival curves, and the grid construction only
/// ever samples that direction. The inverse and the induced rate have generic
/// implementations (bisection and a central difference of the flow balance)
/// that concrete laws may override with closed forms.
pub trait FrontLaw {
    /// Terminal point `(tau_e, rho_e)` of the trajectory.
    fn terminal(&self) -> (f64, f64);

    /// Time at which the front passes `rho_f`. Strictly increasing on
    /// `[0, rho_e]` with `tau_of_rho(0) = 0`.
    fn tau_of_rho(&self, rho_f: f64) -> Result<f64>;

    /// Front position at time `tau`, the inverse of [`FrontLaw::tau_of_rho`].
    fn rho_of_tau(&self, tau: f64) -> Result<f64> {
        let (tau_end, rho_end) = self.terminal();
        check_tau(tau, tau_end)?;
        // Bisection on the monotone trajectory down to bracket collapse, so
        // the result stays accurate even where the curve is nearly flat.
        let mut lo = 0.0_f64;
        let mut hi = rho_end;
        while hi - lo > 2.0 * f64::EPSILON * rho_end.max(1.0) {
            let mid = 0.5 * (lo + hi);
            if self.tau_of_rho(mid)? < tau {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Imbibition rate as a function of front position,
    /// `Q = (1 - rho_f)^2 / (d tau / d rho_f)`.
    fn q_of_rho(&self, rho_f: f64) -> Result<f64> {
        let (_, rho_end) = self.terminal();
        if rho_f <= 0.0 {
            return Err(Error::FlowSingularity);
        }
        if rho_f > rho_end {
            return Err(Error::Domain {
                name: "rho_f",
                value: rho_f,
                min: 0.0,
                max: rho_end,
            });
        }
        let h = (Q_FD_STEP * rho_end)
            .min(0.5 * rho_f)
            .min(0.5 * (rho_end - rho_f).max(f64::MIN_POSITIVE));
        let (a, b) = if rho_f + h > rho_end {
            (rho_end - 2.0 * h, rho_end)
        } else {
            (rho_f - h, rho_f + h)
        };
        let slope = (self.tau_of_rho(b)? - self.tau_of_rho(a)?) / (b - a);
        if !slope.is_finite() || slope <= 0.0 {
            return Err(Error::InvalidFront { rho: rho_f });
        }
        Ok((1.0 - rho_f).powi(2) / slope)
    }

    /// Imbibition rate as a function of time, by composition with the inverse.
    fn q_of_tau(&self, tau: f64) -> Result<f64> {
        let rho = self.rho_of_tau(tau)?;
        self.q_of_rho(rho)
    }
}

fn check_tau(tau: f64, tau_end: f64) -> Result<()> {
    if !tau.is_finite() || tau < 0.0 || tau > tau_end * (1.0 + TAU_END_SLACK) {
        return Err(Error::Domain {
            name: "tau",
            value: tau,
            min: 0.0,
            max: tau_end,
        });
    }
    Ok(())
}

/// Front trajectory for constant capillary pressure in an air-free pellet.
///
/// `sigma` is the dimensionless capillary-pressure coefficient. The liquid
/// reaches the centre at `tau_e = 1 / (6 sigma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantPcFront {
    sigma: f64,
}

impl ConstantPcFront {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::Validation {
                field: "sigma",
                message: format!("must be a positive finite number, got {sigma}"),
            });
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn tau_end(&self) -> f64 {
        1.0 / (6.0 * self.sigma)
    }
}

impl FrontLaw for ConstantPcFront {
    fn terminal(&self) -> (f64, f64) {
        (self.tau_end(), 1.0)
    }

    fn tau_of_rho(&self, rho_f: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&rho_f) || !rho_f.is_finite() {
            return Err(Error::Domain {
                name: "rho_f",
                value: rho_f,
                min: 0.0,
                max: 1.0,
            });
        }
        Ok(rho_f * rho_f * (3.0 - 2.0 * rho_f) / (6.0 * self.sigma))
    }

    /// Inverts the cubic by safeguarded Newton iteration with a bisection
    /// fallback. The cubic is monotone on `[0, 1]`, so the bracket always
    /// shrinks; iteration continues to bracket collapse, which keeps the
    /// result well conditioned even near `rho_f = 1` where the curve flattens.
    fn rho_of_tau(&self, tau: f64) -> Result<f64> {
        let tau_end = self.tau_end();
        check_tau(tau, tau_end)?;
        if tau <= 0.0 {
            return Ok(0.0);
        }
        if tau >= tau_end {
            return Ok(1.0);
        }
        // Solve g(rho) = rho^2 (3 - 2 rho) = y for y in (0, 1).
        let y = 6.0 * self.sigma * tau;
        let g = |r: f64| r * r * (3.0 - 2.0 * r);
        let dg = |r: f64| 6.0 * r * (1.0 - r);
        let mut lo = 0.0_f64;
        let mut hi = 1.0_f64;
        let mut x = (y / 3.0).sqrt().min(1.0); // exact for rho -> 0
        for _ in 0..200 {
            let f = g(x) - y;
            if f < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            if hi - lo <= 2.0 * f64::EPSILON {
                break;
            }
            let d = dg(x);
            let newton = x - f / d;
            x = if d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        Ok(0.5 * (lo + hi))
    }

    fn q_of_rho(&self, rho_f: f64) -> Result<f64> {
        if rho_f == 0.0 {
            return Err(Error::FlowSingularity);
        }
        if !(0.0..=1.0).contains(&rho_f) || !rho_f.is_finite() {
            return Err(Error::Domain {
                name: "rho_f",
                value: rho_f,
                min: 0.0,
                max: 1.0,
            });
        }
        Ok(self.sigma * (1.0 - rho_f) / rho_f)
    }
}
