use faer::{Mat, MatRef};

use super::{DenseOperator, Pauli};
use crate::error::{Error, Result};
use crate::linalg;
use crate::C64;

/// Above this dimension the spectral norm switches from a full SVD to power
/// iteration.
pub const SVD_DIM_LIMIT: usize = 4096;

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITER: usize = 10_000;

/// Result of the iterative norm estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormBracket {
    /// `sqrt` of the Rayleigh quotient of `M†M`; never exceeds the true norm.
    pub lower: f64,
    /// `sqrt(theta + |residual|)`, the residual enclosure of the Ritz value.
    pub upper: f64,
    pub iterations: usize,
}

impl NormBracket {
    pub fn estimate(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Largest singular value.
pub fn spectral_norm(m: MatRef<'_, C64>) -> Result<f64> {
    if !linalg::is_finite(m) {
        return Err(Error::domain("spectral norm of a matrix with non-finite entries"));
    }
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0.0);
    }
    if m.nrows().max(m.ncols()) <= SVD_DIM_LIMIT {
        Ok(linalg::singular_values(m)?.first().copied().unwrap_or(0.0))
    } else {
        Ok(spectral_norm_power(m, POWER_TOL, POWER_MAX_ITER)?.estimate())
    }
}

fn normalize(v: &mut Mat<C64>) -> f64 {
    let n = v.norm_l2();
    if n > 0.0 {
        for i in 0..v.nrows() {
            v[(i, 0)] /= n;
        }
    }
    n
}

/// Power iteration on `M†M` until the bracket's relative width is below `tol`.
///
/// The start vector is fixed, so the estimate is deterministic. Failing to
/// close the bracket within `max_iter` steps is an error.
pub fn spectral_norm_power(m: MatRef<'_, C64>, tol: f64, max_iter: usize) -> Result<NormBracket> {
    let n = m.ncols();
    let mut v = Mat::<C64>::from_fn(n, 1, |i, _| C64::new(1.0 + (i as f64 * 0.618_033_988_75).fract(), 0.0));
    normalize(&mut v);
    for it in 1..=max_iter {
        let mv = m * &v;
        let w = m.adjoint() * &mv;
        let theta = mv.norm_l2().powi(2);
        let residual = (&w - Mat::from_fn(n, 1, |i, _| v[(i, 0)] * theta)).norm_l2();
        let lower = theta.sqrt();
        let upper = (theta + residual).sqrt();
        if theta == 0.0 && residual == 0.0 {
            return Ok(NormBracket { lower: 0.0, upper: 0.0, iterations: it });
        }
        if upper - lower <= tol * upper.max(f64::MIN_POSITIVE) {
            return Ok(NormBracket { lower, upper, iterations: it });
        }
        v = w;
        if normalize(&mut v) == 0.0 {
            return Ok(NormBracket { lower: 0.0, upper: 0.0, iterations: it });
        }
    }
    Err(Error::numerical(format!("power iteration did not bracket the norm within {max_iter} steps")))
}

/// Spectral norm of a Hermitian matrix from its extreme eigenvalues.
pub fn hermitian_norm(m: MatRef<'_, C64>) -> Result<f64> {
    if m.nrows() > SVD_DIM_LIMIT {
        return spectral_norm(m);
    }
    let values = linalg::hermitian_eigenvalues(m)?;
    Ok(values.iter().fold(0.0f64, |acc, v| acc.max(v.abs())))
}

/// `‖[a, b]‖` on the union of supports.
pub fn commutator_norm(a: &DenseOperator, b: &DenseOperator) -> Result<f64> {
    spectral_norm(a.commutator(b)?.matrix())
}

/// `‖[a, P_site]‖` for a single-site Pauli without forming the commutator.
///
/// For `Z` the commutator only has the blocks coupling the two values of the
/// qubit, each doubled, so the norm is twice the larger off-diagonal block
/// norm. `X` and `Y` are rotated onto `Z` first.
pub fn pauli_commutator_norm(a: &DenseOperator, site: usize, kind: Pauli) -> Result<f64> {
    let Some(pos) = a.support().position(site) else {
        return Ok(0.0);
    };
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let rotated;
    let m = match kind {
        Pauli::Z => a.matrix(),
        Pauli::X | Pauli::Y => {
            // G with G P G† = Z: Hadamard for X, H S† for Y
            let g = match kind {
                Pauli::X => Mat::from_fn(2, 2, |i, j| C64::new(if i == 1 && j == 1 { -s } else { s }, 0.0)),
                _ => Mat::from_fn(2, 2, |i, j| {
                    let h = if i == 1 && j == 1 { -s } else { s };
                    if j == 1 { C64::new(0.0, -h) } else { C64::new(h, 0.0) }
                }),
            };
            rotated = linalg::conjugate_local(&a.matrix().to_owned(), g.as_ref(), &[pos]);
            rotated.as_ref()
        }
    };
    let bit = 1usize << pos;
    let zeros: Vec<usize> = (0..m.nrows()).filter(|i| i & bit == 0).collect();
    let ones: Vec<usize> = (0..m.nrows()).filter(|i| i & bit != 0).collect();
    let upper = linalg::submatrix(m, &zeros, &ones);
    let n01 = spectral_norm(upper.as_ref())?;
    let n10 = if linalg::hermiticity_defect(m) <= 1e-13 * (1.0 + linalg::max_abs_entry(m)) {
        n01
    } else {
        spectral_norm(linalg::submatrix(m, &ones, &zeros).as_ref())?
    };
    Ok(2.0 * n01.max(n10))
}
