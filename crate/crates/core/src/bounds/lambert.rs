//! The two real branches of the Lambert W function, `y e^y = x`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `-1/e`, where the two real branches meet.
pub const BRANCH_POINT: f64 = -0.36787944117144233;

/// Halley steps allowed before giving up.
pub const MAX_HALLEY_STEPS: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `W_0`, values `>= -1`, defined for `x >= -1/e`.
    #[serde(rename = "0")]
    Principal,
    /// `W_{-1}`, values `<= -1`, defined for `-1/e <= x < 0`.
    #[serde(rename = "-1")]
    Lower,
}

impl Branch {
    pub fn index(self) -> i32 {
        match self {
            Branch::Principal => 0,
            Branch::Lower => -1,
        }
    }

    pub fn from_index(k: i32) -> Result<Self> {
        match k {
            0 => Ok(Branch::Principal),
            -1 => Ok(Branch::Lower),
            _ => Err(Error::domain(format!("only the real branches 0 and -1 exist, got {k}"))),
        }
    }
}

/// Relative residual `|y e^y - x| / max(1, |x|)`.
pub fn residual(y: f64, x: f64) -> f64 {
    (y * y.exp() - x).abs() / x.abs().max(1.0)
}

/// Starting point: the branch-point series near `-1/e`, the logarithmic
/// asymptotics `L1 - L2 + L2 / L1` far from it, `ln(1 + x)` in between.
fn initial_guess(branch: Branch, x: f64) -> f64 {
    let p = (2.0 * (std::f64::consts::E * x + 1.0)).max(0.0).sqrt();
    let series = |p: f64| -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    match branch {
        Branch::Principal if x < -0.32 => series(p),
        Branch::Principal if x < 3.0 => (1.0 + x).ln(),
        Branch::Principal => {
            let (l1, l2) = (x.ln(), x.ln().ln());
            l1 - l2 + l2 / l1
        }
        Branch::Lower if x < -0.25 => series(-p),
        Branch::Lower => {
            let l1 = (-x).ln();
            let l2 = (-l1).ln();
            l1 - l2 + l2 / l1
        }
    }
}

/// `W_b(x)` by Halley iteration.
pub fn lambert_w(branch: Branch, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("lambert W of non-finite argument {x}")));
    }
    if x < BRANCH_POINT {
        return Err(Error::domain(format!("lambert W is real only for x >= -1/e = {BRANCH_POINT}, got {x}")));
    }
    if branch == Branch::Lower && x >= 0.0 {
        return Err(Error::domain(format!("branch -1 needs -1/e <= x < 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if std::f64::consts::E * x + 1.0 <= 0.0 {
        return Ok(-1.0);
    }
    let mut y = initial_guess(branch, x);
    for _ in 0..MAX_HALLEY_STEPS {
        let ey = y.exp();
        let f = y * ey - x;
        // near the branch point the step is dominated by rounding in f, so
        // a residual at machine precision also ends the iteration
        if f.abs() <= 2.0 * f64::EPSILON * x.abs().max(1.0) {
            return Ok(y);
        }
        let denom = ey * (y + 1.0) - (y + 2.0) * f / (2.0 * y + 2.0);
        let step = f / denom;
        if !step.is_finite() {
            break;
        }
        y -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + y.abs()) {
            return Ok(y);
        }
    }
    Err(Error::numerical(format!("halley iteration for W_{}({x}) did not converge", branch.index())))
}
