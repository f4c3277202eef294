//! Pointwise comparison of data with a bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    /// `bound - data` per point.
    pub slack: Vec<f64>,
    pub min_slack: f64,
    /// Points with `data > bound + tol`.
    pub violations: usize,
    pub tol: f64,
}

/// Slack of `bound` over `data` on aligned axes.
pub fn dominance_report(data: &[f64], bound: &[f64], tol: f64) -> Result<DominanceReport> {
    if data.len() != bound.len() {
        return Err(Error::DimensionMismatch { expected: bound.len(), found: data.len() });
    }
    let slack: Vec<f64> = bound.iter().zip(data).map(|(b, d)| b - d).collect();
    let min_slack = slack.iter().copied().fold(f64::INFINITY, f64::min);
    let violations = slack.iter().filter(|&&s| s < -tol).count();
    Ok(DominanceReport { slack, min_slack, violations, tol })
}

/// Entropy data in bits against a bound in nats: the data is multiplied by
/// `ln 2` before comparing.
pub fn entropy_dominance(data_bits: &[f64], bound_nats: &[f64], tol: f64) -> Result<DominanceReport> {
    let ln2 = std::f64::consts::LN_2;
    log::debug!("entropy dominance converts bits to nats with factor {ln2}");
    let nats: Vec<f64> = data_bits.iter().map(|s| s * ln2).collect();
    dominance_report(&nats, bound_nats, tol)
}
