//! Shape of the operator-spreading front: linear versus logarithmic growth
//! of `r_theta(t)`, compared by AIC.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::contour::Contour;
use crate::error::{Error, Result};
use crate::linalg::least_squares;

/// Fewest contour points accepted by [`front_fit`].
pub const MIN_FRONT_POINTS: usize = 6;

/// Floor on `RSS / n` inside the AIC, so exact fits stay finite.
const RSS_FLOOR: f64 = 1e-30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrontModel {
    /// `r = v_B t + c`.
    Linear,
    /// `r = a ln t + b`.
    Logarithmic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFit {
    pub params: Vec<f64>,
    pub stderr: Vec<f64>,
    pub rss: f64,
    pub aic: f64,
}

/// `r = v_B t + (t^p ln(1/theta) / lambda)^(1/(1+p))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BroadenedFit {
    pub v_b: f64,
    pub p: f64,
    pub lambda: f64,
    pub rss: f64,
    pub aic: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontFit {
    pub theta: f64,
    pub points: Vec<(f64, f64)>,
    pub linear: ModelFit,
    pub logarithmic: ModelFit,
    /// Reported only; the selection is between the two two-parameter models.
    pub broadened: Option<BroadenedFit>,
    pub selected: FrontModel,
    /// Slope of the linear model and its 95% confidence interval.
    pub v_b: f64,
    pub v_b_ci: (f64, f64),
}

/// `n ln(RSS / n) + 2k`.
pub fn aic(rss: f64, n: usize, k: usize) -> f64 {
    n as f64 * (rss / n as f64).max(RSS_FLOOR).ln() + 2.0 * k as f64
}

fn ols(rows: Vec<Vec<f64>>, y: &[f64]) -> Result<ModelFit> {
    let fit = least_squares(&rows, y)?;
    let k = fit.coef.len();
    Ok(ModelFit { aic: aic(fit.rss, y.len(), k), params: fit.coef, stderr: fit.stderr, rss: fit.rss })
}

fn broadened(t: &[f64], r: &[f64], theta: f64) -> Option<BroadenedFit> {
    let ln_inv = (1.0 / theta).ln();
    if ln_inv <= 0.0 {
        return None;
    }
    let mut best: Option<BroadenedFit> = None;
    for step in 0..=200 {
        let p = 0.05 * 400f64.powf(step as f64 / 200.0);
        let q = p / (1.0 + p);
        let rows: Vec<Vec<f64>> = t.iter().map(|&ti| vec![ti, ti.powf(q)]).collect();
        let Ok(fit) = least_squares(&rows, r) else { continue };
        let (v_b, c) = (fit.coef[0], fit.coef[1]);
        if c <= 0.0 {
            continue;
        }
        if best.as_ref().is_none_or(|b| fit.rss < b.rss) {
            let lambda = ln_inv / c.powf(1.0 + p);
            best = Some(BroadenedFit { v_b, p, lambda, rss: fit.rss, aic: aic(fit.rss, t.len(), 3) });
        }
    }
    best
}

/// Linear and logarithmic fits of a growth curve `y(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub linear: ModelFit,
    pub logarithmic: ModelFit,
    /// Lower AIC wins; ties go to the linear model.
    pub selected: FrontModel,
}

/// Fits `y = v t + c` and `y = a ln t + b` to `(t, y)` points.
pub fn growth_fit(points: &[(f64, f64)]) -> Result<GrowthFit> {
    let n = points.len();
    if n < MIN_FRONT_POINTS {
        return Err(Error::domain(format!("growth fit needs at least {MIN_FRONT_POINTS} points, got {n}")));
    }
    if points.iter().any(|&(t, y)| !(t > 0.0 && t.is_finite() && y.is_finite())) {
        return Err(Error::domain("growth fit needs positive finite times and finite values"));
    }
    let (t, y): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    let spread = y.iter().copied().fold(f64::NEG_INFINITY, f64::max) - y.iter().copied().fold(f64::INFINITY, f64::min);
    if spread <= 1e-12 * (1.0 + y[0].abs()) {
        return Err(Error::domain("growth curve is constant"));
    }
    let linear = ols(t.iter().map(|&ti| vec![ti, 1.0]).collect(), &y)?;
    let logarithmic = ols(t.iter().map(|&ti| vec![ti.ln(), 1.0]).collect(), &y)?;
    let selected = if logarithmic.aic < linear.aic { FrontModel::Logarithmic } else { FrontModel::Linear };
    Ok(GrowthFit { linear, logarithmic, selected })
}

/// Fits the contour with the linear and logarithmic front models.
pub fn front_fit(contour: &Contour) -> Result<FrontFit> {
    let points = contour.rows.clone();
    let GrowthFit { linear, logarithmic, selected } = growth_fit(&points)?;
    let n = points.len();
    let (t, r): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    let v_b = linear.params[0];
    let quantile = StudentsT::new(0.0, 1.0, (n - 2) as f64)
        .map_err(|e| Error::numerical(format!("student t: {e}")))?
        .inverse_cdf(0.975);
    let half = quantile * linear.stderr[0];
    Ok(FrontFit {
        theta: contour.theta,
        broadened: broadened(&t, &r, contour.theta),
        points,
        linear,
        logarithmic,
        selected,
        v_b,
        v_b_ci: (v_b - half, v_b + half),
    })
}
