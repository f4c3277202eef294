//! Time evolution.
//!
//! Exact diagonalization is the default engine; the Lanczos propagator is an
//! opt-in for pure-state traces on registers too large for full matrices.

mod krylov;
mod propagator;

use serde::{Deserialize, Serialize};

pub use krylov::{krylov_evolve, STEP_TOL};
pub use propagator::{EigenOperator, Propagator};

use crate::error::{Error, Result};

/// Time-evolution engine selectable from configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Exact,
    Krylov,
}

/// Spacing of a generated time grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

/// `points` times from `t_min` to `t_max` inclusive.
pub fn time_grid(t_min: f64, t_max: f64, points: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(Error::Config("time grid needs at least one point".into()));
    }
    if !(t_min.is_finite() && t_max.is_finite()) || t_max < t_min {
        return Err(Error::Config(format!("invalid time range [{t_min}, {t_max}]")));
    }
    if points == 1 {
        return Ok(vec![t_min]);
    }
    let step = |k: usize| k as f64 / (points - 1) as f64;
    match spacing {
        Spacing::Linear => Ok((0..points).map(|k| t_min + (t_max - t_min) * step(k)).collect()),
        Spacing::Log => {
            if t_min <= 0.0 {
                return Err(Error::Config("log-spaced time grid needs t_min > 0".into()));
            }
            let (a, b) = (t_min.ln(), t_max.ln());
            Ok((0..points)
                .map(|k| match k {
                    0 => t_min,
                    _ if k == points - 1 => t_max,
                    _ => (a + (b - a) * step(k)).exp(),
                })
                .collect())
        }
    }
}
