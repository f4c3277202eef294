//! Fitting light-cone parameters to measured commutator grids.

use serde::{Deserialize, Serialize};

use super::llc::{lbit_bound, llc_bound, LlcParams};
use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::probes::{LightConeGrid, NOISE_FLOOR};

/// Result of [`fit_llc`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlcFit {
    /// Parameters with `C` inflated so that no admissible cell exceeds the bound.
    pub params: LlcParams,
    /// Standard errors of `(C, alpha, xi)` from the regression.
    pub stderr: [f64; 3],
    /// Prefactor of the plain least-squares fit.
    pub c_ols: f64,
    /// Fraction of admissible cells above the plain fit.
    pub violations_before: f64,
    /// Fraction of admissible cells above the inflated bound.
    pub violations: f64,
    pub cells_used: usize,
    /// `C / min(|X|, |Y|)` for single-site probes.
    pub c_per_support: f64,
}

/// Cells `(t, l, value)` that enter a fit: positive time and a value above the
/// noise floor.
fn admissible(cells: &[(f64, f64, f64)]) -> Vec<(f64, f64, f64)> {
    cells.iter().copied().filter(|&(t, _, v)| t > 0.0 && v > NOISE_FLOOR && v.is_finite()).collect()
}

fn distinct(values: impl Iterator<Item = f64>) -> usize {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.len()
}

/// Least squares of `ln value = ln C + alpha ln t - l / xi` over pooled cells
/// `(t, l, value)`, then `C` is raised by the largest positive residual.
pub fn fit_llc_cells(cells: &[(f64, f64, f64)]) -> Result<LlcFit> {
    let used = admissible(cells);
    if distinct(used.iter().map(|c| c.0)) < 3 || distinct(used.iter().map(|c| c.1)) < 3 {
        return Err(Error::domain("light-cone fit needs 3 times and 3 distances above the noise floor"));
    }
    let rows: Vec<Vec<f64>> = used.iter().map(|&(t, l, _)| vec![1.0, t.ln(), l]).collect();
    let y: Vec<f64> = used.iter().map(|c| c.2.ln()).collect();
    let fit = least_squares(&rows, &y)?;
    let (ln_c, alpha, slope) = (fit.coef[0], fit.coef[1], fit.coef[2]);
    if !(slope < 0.0 && alpha > 0.0) {
        return Err(Error::numerical(format!("fitted light cone does not decay (alpha {alpha}, slope {slope})")));
    }
    let xi = -1.0 / slope;
    let lift = fit.residuals.iter().copied().fold(0.0, f64::max);
    let c_ols = ln_c.exp();
    let params = LlcParams::new(c_ols * lift.exp(), alpha, xi)?;
    let above = |p: &LlcParams| {
        used.iter().filter(|&&(t, l, v)| v > llc_bound(p, 1.0, 1.0, t, l) * (1.0 + 1e-12)).count() as f64
            / used.len() as f64
    };
    let plain = LlcParams { c: c_ols, ..params };
    Ok(LlcFit {
        stderr: [params.c * fit.stderr[0], fit.stderr[1], fit.stderr[2] / (slope * slope)],
        violations_before: above(&plain),
        violations: above(&params),
        cells_used: used.len(),
        c_per_support: params.c,
        c_ols,
        params,
    })
}

/// [`fit_llc_cells`] on one grid, with the distance as `l`.
pub fn fit_llc(grid: &LightConeGrid) -> Result<LlcFit> {
    let cells: Vec<(f64, f64, f64)> = grid.cells().map(|(t, r, v)| (t, r as f64, v)).collect();
    fit_llc_cells(&cells)
}

/// Smallest prefactor for which `const t e^{-l/(2 xi')}` dominates every cell
/// with positive time.
pub fn fit_lbit_prefactor(cells: &[(f64, f64, f64)], xi_prime: f64) -> Result<f64> {
    if !(xi_prime.is_finite() && xi_prime > 0.0) {
        return Err(Error::Config(format!("localization length must be positive, got {xi_prime}")));
    }
    let mut best = 0.0f64;
    for &(t, l, v) in cells {
        if t <= 0.0 {
            if v > NOISE_FLOOR {
                return Err(Error::domain("l-bit bound vanishes at t = 0 but the data does not"));
            }
            continue;
        }
        best = best.max(v / lbit_bound(1.0, 1.0, 1.0, t, l, xi_prime));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probes::GridMeta;

    #[test]
    fn synthetic_grid_is_recovered() {
        let times: Vec<f64> = (0..6).map(|k| 10f64.powf(k as f64 / 2.0)).collect();
        let distances: Vec<usize> = (1..=5).collect();
        let values =
            times.iter().map(|&t| distances.iter().map(|&r| 2.0 * t * (-(r as f64) / 0.8).exp()).collect()).collect();
        let grid = LightConeGrid::new(times, distances, values, GridMeta::default()).unwrap();
        let fit = fit_llc(&grid).unwrap();
        assert!((fit.params.c - 2.0).abs() < 1e-6);
        assert!((fit.params.alpha - 1.0).abs() < 1e-6);
        assert!((fit.params.xi - 0.8).abs() < 1e-6);
        assert_eq!(fit.violations, 0.0);
    }

    #[test]
    fn noise_only_grid_is_rejected() {
        let grid = LightConeGrid::new(vec![1.0, 2.0, 3.0], vec![1, 2, 3], vec![vec![1e-14; 3]; 3], GridMeta::default())
            .unwrap();
        assert!(fit_llc(&grid).is_err());
    }
}
