//! Entanglement-growth bound for systems with a logarithmic light cone.
//!
//! After a cut with `|∂|` boundary terms, the entropy change up to time `t`
//! is at most
//!
//! `f(r, t) = 2|∂| r + C1 |∂|^2 t^{alpha+1} / (alpha+1) (xi r + xi^2) e^{-r/xi}`
//!
//! for every truncation radius `r`. Setting `df/dr = 0` gives
//! `(-r/xi) e^{-r/xi} = x` with `x = -2(alpha+1) / (C1 |∂| xi t^{alpha+1})`,
//! whose minimizing root is `r* = -xi W_{-1}(x)`. All values are in nats.

use serde::{Deserialize, Serialize};

use super::lambert::{lambert_w, Branch, BRANCH_POINT};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Inputs {
    /// Number of boundary terms `|∂|`.
    pub boundary: f64,
    pub xi: f64,
    pub alpha: f64,
    /// Composite constant collecting the light-cone prefactor, the
    /// incremental-entangling constant and `J`.
    pub c1: f64,
    /// Largest boundary-term norm, recorded with the fit.
    pub j: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// Trivial entropy cap `min(|A|, |B|) ln 2`, if known.
    pub cap: Option<f64>,
}

impl Theorem1Inputs {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.boundary, self.xi, self.alpha, self.c1, self.j]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if !positive {
            return Err(Error::Config(format!("bound inputs must be positive: {self:?}")));
        }
        if !(self.r_min >= 1.0 && self.r_max >= self.r_min && self.r_max.is_finite()) {
            return Err(Error::Config(format!("invalid radius window [{}, {}]", self.r_min, self.r_max)));
        }
        if self.cap.is_some_and(|c| !(c.is_finite() && c >= 0.0)) {
            return Err(Error::Config("entropy cap must be finite and non-negative".into()));
        }
        Ok(())
    }

    pub fn with_c1(self, c1: f64) -> Self {
        Theorem1Inputs { c1, ..self }
    }

    /// `C1 |∂|^2 t^{alpha+1} / (alpha+1)`.
    fn k(&self, t: f64) -> f64 {
        self.c1 * self.boundary * self.boundary * t.powf(self.alpha + 1.0) / (self.alpha + 1.0)
    }

    /// `f(r, t)`.
    pub fn f(&self, r: f64, t: f64) -> f64 {
        2.0 * self.boundary * r + self.k(t) * (self.xi * r + self.xi * self.xi) * (-r / self.xi).exp()
    }

    /// Argument of the Lambert function in the stationarity condition.
    pub fn lambert_argument(&self, t: f64) -> f64 {
        -2.0 * (self.alpha + 1.0) / (self.c1 * self.boundary * self.xi * t.powf(self.alpha + 1.0))
    }

    /// Stationary minimizer `-xi W_{-1}(x)`, if `x >= -1/e`.
    pub fn stationary_radius(&self, t: f64) -> Result<Option<f64>> {
        let x = self.lambert_argument(t);
        if x < BRANCH_POINT {
            return Ok(None);
        }
        Ok(Some(-self.xi * lambert_w(Branch::Lower, x)?))
    }
}

/// How the bound at one time was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundDiagnostic {
    /// Minimum at the stationary point inside the radius window.
    Stationary,
    /// No usable stationary point; minimum at an end of the window.
    WindowEdge,
    /// The trivial entropy cap is smaller than `f`.
    Cap,
}

impl BoundDiagnostic {
    pub fn name(self) -> &'static str {
        match self {
            BoundDiagnostic::Stationary => "stationary",
            BoundDiagnostic::WindowEdge => "window-edge",
            BoundDiagnostic::Cap => "cap",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Point {
    pub t: f64,
    pub bound: f64,
    pub r_star: f64,
    pub diagnostic: BoundDiagnostic,
}

/// `min_{r in [r_min, r_max]} f(r, t)`, capped by the trivial bound.
///
/// `f` decreases between the two stationary roots and increases outside
/// them, so the window minimum is at `r*` or at an end of the window.
pub fn theorem1_rhs(inp: &Theorem1Inputs, t: f64) -> Result<Theorem1Point> {
    inp.validate()?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("entanglement bound needs t > 0, got {t}")));
    }
    let mut best = (inp.f(inp.r_min, t), inp.r_min, BoundDiagnostic::WindowEdge);
    let edge = inp.f(inp.r_max, t);
    if edge < best.0 {
        best = (edge, inp.r_max, BoundDiagnostic::WindowEdge);
    }
    if let Some(r) = inp.stationary_radius(t)? {
        if (inp.r_min..=inp.r_max).contains(&r) && inp.f(r, t) <= best.0 {
            best = (inp.f(r, t), r, BoundDiagnostic::Stationary);
        }
    }
    if let Some(cap) = inp.cap {
        if cap < best.0 {
            best = (cap, best.1, BoundDiagnostic::Cap);
        }
    }
    Ok(Theorem1Point { t, bound: best.0, r_star: best.1, diagnostic: best.2 })
}

/// Closed form `4|∂| xi [(alpha+1) ln t + ln(|∂| xi) + ln(C1 sqrt(e) / (2(alpha+1)))]`,
/// which dominates `f(r*, t)` wherever the stationary point exists.
pub fn theorem1_loosened(inp: &Theorem1Inputs, t: f64) -> f64 {
    let a1 = inp.alpha + 1.0;
    4.0 * inp.boundary
        * inp.xi
        * (a1 * t.ln() + (inp.boundary * inp.xi).ln() + (inp.c1 * 0.5f64.exp() / (2.0 * a1)).ln())
}

/// Bound values along a time grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub times: Vec<f64>,
    pub bounds: Vec<f64>,
    pub r_star: Vec<f64>,
    pub diagnostics: Vec<BoundDiagnostic>,
}

pub fn theorem1_curve(inp: &Theorem1Inputs, times: &[f64]) -> Result<BoundCurve> {
    let points = times.iter().map(|&t| theorem1_rhs(inp, t)).collect::<Result<Vec<_>>>()?;
    Ok(BoundCurve {
        times: times.to_vec(),
        bounds: points.iter().map(|p| p.bound).collect(),
        r_star: points.iter().map(|p| p.r_star).collect(),
        diagnostics: points.iter().map(|p| p.diagnostic).collect(),
    })
}

/// Smallest `C1` for which the bound dominates every `(t, delta_s)` pair
/// (entropies in nats), found by bisection in `ln C1`.
pub fn fit_c1(inp: &Theorem1Inputs, data: &[(f64, f64)]) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::domain("no training points for the bound constant"));
    }
    let dominates = |c1: f64| -> Result<bool> {
        let trial = inp.with_c1(c1);
        for &(t, s) in data {
            if theorem1_rhs(&trial, t)?.bound < s {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let (mut lo, mut hi) = (1e-300f64.ln(), 1e300f64.ln());
    if dominates(lo.exp())? {
        return Ok(lo.exp());
    }
    if !dominates(hi.exp())? {
        return Err(Error::numerical("no bound constant dominates the training data"));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if dominates(mid.exp())? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi.exp())
}
