//! Shared fixtures for the unit tests.

use crate::error::{Error, Result};
use crate::front::FrontLaw;

/// Straight-line trajectory `tau = tau_e * rho_f` with terminal radius 1.
///
/// Keeps the generic trait defaults for the inverse and the rate, so tests
/// exercise those code paths too.
pub struct LinearFront {
    tau_end: f64,
}

impl LinearFront {
    pub fn new(tau_end: f64) -> Self {
        Self { tau_end }
    }
}

impl FrontLaw for LinearFront {
    fn terminal(&self) -> (f64, f64) {
        (self.tau_end, 1.0)
    }

    fn tau_of_rho(&self, rho_f: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&rho_f) {
            return Err(Error::Domain {
                name: "rho_f",
                value: rho_f,
                min: 0.0,
                max: 1.0,
            });
        }
        Ok(self.tau_end * rho_f)
    }
}

/// Compensated sum, for asserting identities that telescope exactly.
pub fn kahan_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for &v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}
