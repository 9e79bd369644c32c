//! Run configuration: a plain `key = value` text format plus overrides.
//!
//! One assignment per line, `#` starts a comment line, unknown keys are
//! rejected. Command-line overrides go through the same setter and win over
//! the file. Defaults are the reference parameter set of the constant
//! capillary-pressure example.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::front::ConstantPcFront;
use crate::solver::{ModelParams, SolverConfig};

/// Valid keys, kept in sync with [`RunConfig::set`] (listed in error messages).
pub const VALID_KEYS: &str = "sigma, eta, d, kplus, kminus, u0, n, tol, max_iters, \
     balance_threshold, axis_scale, profile_fractions, output_dir";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Capillary-pressure coefficient of the front law.
    pub sigma: f64,
    pub eta: f64,
    pub d: f64,
    pub kplus: f64,
    pub kminus: f64,
    pub u0: f64,
    /// Number of grid cells / time levels.
    pub n: usize,
    /// Fixed-point stopping tolerance.
    pub tol: f64,
    pub max_iters: usize,
    /// PASS/FAIL threshold on the bookkeeping check.
    pub balance_threshold: f64,
    /// Weight of the time axis in the equal-arc division of the front path.
    pub axis_scale: f64,
    /// Front-position fractions at which radial profiles are dumped.
    pub profile_fractions: Vec<f64>,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            sigma: 5.0,
            eta: 6.0,
            d: 0.1,
            kplus: 10.0,
            kminus: 0.1,
            u0: 1.0,
            n: 1000,
            tol: 1e-6,
            max_iters: 100,
            balance_threshold: 1e-2,
            axis_scale: 1.0,
            profile_fractions: vec![0.25, 0.5, 0.75, 1.0],
            output_dir: PathBuf::from("out"),
        }
    }
}

fn parse_f64(field: &'static str, value: &str) -> Result<f64> {
    value.parse().map_err(|_| Error::Validation {
        field,
        message: format!("expected a number, got {value:?}"),
    })
}

fn parse_usize(field: &'static str, value: &str) -> Result<usize> {
    value.parse().map_err(|_| Error::Validation {
        field,
        message: format!("expected a nonnegative integer, got {value:?}"),
    })
}

impl RunConfig {
    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "sigma" => self.sigma = parse_f64("sigma", value)?,
            "eta" => self.eta = parse_f64("eta", value)?,
            "d" => self.d = parse_f64("d", value)?,
            "kplus" => self.kplus = parse_f64("kplus", value)?,
            "kminus" => self.kminus = parse_f64("kminus", value)?,
            "u0" => self.u0 = parse_f64("u0", value)?,
            "n" => self.n = parse_usize("n", value)?,
            "tol" => self.tol = parse_f64("tol", value)?,
            "max_iters" => self.max_iters = parse_usize("max_iters", value)?,
            "balance_threshold" => self.balance_threshold = parse_f64("balance_threshold", value)?,
            "axis_scale" => self.axis_scale = parse_f64("axis_scale", value)?,
            "profile_fractions" => {
                let mut fractions = Vec::new();
                for part in value.split(',') {
                    let part = part.trim();
                    if !part.is_empty() {
                        fractions.push(parse_f64("profile_fractions", part)?);
                    }
                }
                self.profile_fractions = fractions;
            }
            "output_dir" => self.output_dir = PathBuf::from(value),
            _ => {
                return Err(Error::UnknownKey {
                    key: key.to_string(),
                    valid: VALID_KEYS,
                })
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for (field, value) in [
            ("sigma", self.sigma),
            ("tol", self.tol),
            ("balance_threshold", self.balance_threshold),
            ("axis_scale", self.axis_scale),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Validation {
                    field,
                    message: format!("must be a positive finite number, got {value}"),
                });
            }
        }
        for (field, value) in [
            ("eta", self.eta),
            ("d", self.d),
            ("kplus", self.kplus),
            ("kminus", self.kminus),
            ("u0", self.u0),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::Validation {
                    field,
                    message: format!("must be finite and nonnegative, got {value}"),
                });
            }
        }
        if self.n < 2 {
            return Err(Error::Validation {
                field: "n",
                message: format!("grid size must be at least 2, got {}", self.n),
            });
        }
        if self.max_iters < 1 {
            return Err(Error::Validation {
                field: "max_iters",
                message: "must be at least 1".into(),
            });
        }
        for &f in &self.profile_fractions {
            if !(f.is_finite() && f > 0.0 && f <= 1.0) {
                return Err(Error::Validation {
                    field: "profile_fractions",
                    message: format!("fractions must lie in (0, 1], got {f}"),
                });
            }
        }
        Ok(())
    }

    /// Serialises to the same `key = value` format the parser accepts.
    pub fn serialize(&self) -> String {
        let fractions = self
            .profile_fractions
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        format!(
            "sigma = {}\neta = {}\nd = {}\nkplus = {}\nkminus = {}\nu0 = {}\n\
             n = {}\ntol = {}\nmax_iters = {}\nbalance_threshold = {}\n\
             axis_scale = {}\nprofile_fractions = {}\noutput_dir = {}\n",
            self.sigma,
            self.eta,
            self.d,
            self.kplus,
            self.kminus,
            self.u0,
            self.n,
            self.tol,
            self.max_iters,
            self.balance_threshold,
            self.axis_scale,
            fractions,
            self.output_dir.display(),
        )
    }

    pub fn model_params(&self) -> ModelParams {
        ModelParams {
            eta: self.eta,
            d: self.d,
            kplus: self.kplus,
            kminus: self.kminus,
            u0: self.u0,
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            tol: self.tol,
            max_iters: self.max_iters,
        }
    }

    pub fn front(&self) -> Result<ConstantPcFront> {
        ConstantPcFront::new(self.sigma)
    }
}

/// Parses file contents, applies overrides on top (overrides win), then
/// validates the populated configuration.
pub fn parse_config(contents: &str, overrides: &[(String, String)]) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    for (idx, raw) in contents.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::ConfigParse {
            line: idx + 1,
            text: raw.to_string(),
        })?;
        config.set(key.trim(), value.trim())?;
    }
    for (key, value) in overrides {
        config.set(key, value)?;
    }
    config.validate()?;
    Ok(config)
}
