//! Pinned numeric tolerances.
//!
//! Every approximate comparison in the crate goes through a [`Tolerances`]
//! value so that tests and the CLI agree on one set of constants. Relative
//! tolerances are scaled by the quantity named in the field doc; absolute
//! ones are used as-is.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Triangle-inequality slack, relative to the diameter.
    pub metric: f64,
    /// Quadratic-form comparisons (simplex-vector zero sums, cone membership),
    /// relative to the largest coefficient magnitude.
    pub form: f64,
    /// Eigenvalue floor for positive-semidefiniteness, relative to the
    /// largest matrix entry magnitude.
    pub psd: f64,
    /// Verdict threshold for the simplex minimum of a comparison form,
    /// relative to the largest |a_ij|.
    pub lss: f64,
    /// Tense equality detection, relative to the diameter (distances) or
    /// squared diameter (form minima).
    pub tense: f64,
    /// Configuration / certificate distance checks, relative to the diameter.
    pub cfg: f64,
    /// Barycentric-coordinate floor when checking hull membership.
    pub hull: f64,
    /// Angle comparisons, absolute (radians).
    pub ang: f64,
    /// Distance of a placed point to a polytope edge below which the
    /// general-position nudge kicks in, relative to the diameter.
    pub edge: f64,
    /// Minimum coordinate for an "interior" simplex argmin.
    pub lambda_floor: f64,
    /// Multistart count for the comparison-configuration solver.
    pub multistarts: u32,
    /// Iteration cap per descent run.
    pub max_iters: u32,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            metric: 1e-9,
            form: 1e-10,
            psd: 1e-8,
            lss: 1e-9,
            tense: 1e-8,
            cfg: 1e-8,
            hull: 1e-8,
            ang: 1e-9,
            edge: 1e-7,
            lambda_floor: 1e-6,
            multistarts: 16,
            max_iters: 10_000,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ToleranceError {
    #[error("unknown tolerance name {0:?}")]
    UnknownName(String),
    #[error("tolerance {0} must be positive")]
    NotPositive(String),
}

impl Tolerances {
    /// Set a tolerance by name, as used by the CLI `--tol name=value` flag.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ToleranceError> {
        if !(value > 0.0) {
            return Err(ToleranceError::NotPositive(name.to_string()));
        }
        match name {
            "metric" => self.metric = value,
            "form" => self.form = value,
            "psd" => self.psd = value,
            "lss" => self.lss = value,
            "tense" => self.tense = value,
            "cfg" => self.cfg = value,
            "hull" => self.hull = value,
            "ang" => self.ang = value,
            "edge" => self.edge = value,
            "lambda_floor" => self.lambda_floor = value,
            "multistarts" => self.multistarts = value as u32,
            "max_iters" => self.max_iters = value as u32,
            other => return Err(ToleranceError::UnknownName(other.to_string())),
        }
        Ok(())
    }
}
