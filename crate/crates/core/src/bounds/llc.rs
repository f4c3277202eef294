//! The logarithmic light-cone bound `C ‖O_X‖ ‖O_Y‖ |t|^alpha e^{-l/xi}` and
//! its l-bit special case.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(C, alpha, xi)` of a logarithmic light cone.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlcParams {
    #[serde(rename = "C")]
    pub c: f64,
    pub alpha: f64,
    pub xi: f64,
}

impl LlcParams {
    pub fn new(c: f64, alpha: f64, xi: f64) -> Result<Self> {
        let p = LlcParams { c, alpha, xi };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.c.is_finite() && self.c >= 0.0 && self.alpha.is_finite() && self.alpha > 0.0;
        if ok && self.xi.is_finite() && self.xi > 0.0 {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid light-cone parameters {self:?}")))
        }
    }
}

/// `C ‖O_X‖ ‖O_Y‖ |t|^alpha e^{-l/xi}`.
pub fn llc_bound(p: &LlcParams, norm_x: f64, norm_y: f64, t: f64, l: f64) -> f64 {
    p.c * norm_x * norm_y * t.abs().powf(p.alpha) * (-l / p.xi).exp()
}

/// `const t ‖O_X‖ ‖O_Y‖ e^{-l/(2 xi')}`, the light cone of an l-bit model with
/// localization length `xi'`.
pub fn lbit_bound(prefactor: f64, norm_x: f64, norm_y: f64, t: f64, l: f64, xi_prime: f64) -> f64 {
    llc_bound(&LlcParams { c: prefactor, alpha: 1.0, xi: 2.0 * xi_prime }, norm_x, norm_y, t, l)
}
