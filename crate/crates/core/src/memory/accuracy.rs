//! The deviation `min_z ‖P O(t) P - z P‖` of a compressed operator from a
//! multiple of the code projector.

use faer::{Mat, MatRef};
use serde::{Deserialize, Serialize};

use super::code::StabilizerCode;
use crate::error::{Error, Result};
use crate::evolve::Propagator;
use crate::lattice::SiteSet;
use crate::linalg;
use crate::operators::{spectral_norm, DenseOperator, PauliString};
use crate::C64;

/// What to do with probes that are not Hermitian.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonHermitianPolicy {
    #[default]
    Reject,
    /// Minimize over complex `z` numerically.
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Accuracy {
    pub deviation: f64,
    pub z_star: C64,
}

/// `U(t) Q` for the code basis `Q`.
pub fn evolved_basis(code: &StabilizerCode, prop: &Propagator, t: f64) -> Result<Mat<C64>> {
    let q = code.basis();
    let cols: Vec<Vec<C64>> = (0..q.ncols())
        .map(|c| prop.evolve_amplitudes(&(0..q.nrows()).map(|i| q[(i, c)]).collect::<Vec<_>>(), t))
        .collect::<Result<_>>()?;
    Ok(Mat::from_fn(q.nrows(), q.ncols(), |i, c| cols[c][i]))
}

/// `(UQ)† O (UQ)` for a Pauli string, which equals `Q† O(t) Q`.
pub fn compress_pauli(o: &PauliString, evolved: MatRef<'_, C64>, num_qubits: usize) -> Result<Mat<C64>> {
    let (flip, values) = o.permutation_form(&SiteSet::range(0, num_qubits))?;
    let o_q = Mat::from_fn(evolved.nrows(), evolved.ncols(), |i, c| values[i ^ flip] * evolved[(i ^ flip, c)]);
    Ok(evolved.adjoint() * o_q)
}

/// `(UQ)† O (UQ)` for an operator on the full register.
pub fn compress_dense(o: &DenseOperator, evolved: MatRef<'_, C64>, num_qubits: usize) -> Result<Mat<C64>> {
    let full = o.extend_to(&SiteSet::range(0, num_qubits))?;
    Ok(evolved.adjoint() * full.matrix() * evolved)
}

/// Exact minimizer for a Hermitian compression: the spectral midpoint.
pub fn hermitian_deviation(m: MatRef<'_, C64>) -> Result<Accuracy> {
    let values = linalg::hermitian_eigenvalues(m)?;
    let (lo, hi) = (values[0], values[values.len() - 1]);
    Ok(Accuracy { deviation: 0.5 * (hi - lo), z_star: C64::new(0.5 * (hi + lo), 0.0) })
}

fn ternary(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..120 {
        let a = lo + (hi - lo) / 3.0;
        let b = hi - (hi - lo) / 3.0;
        if f(a) <= f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    0.5 * (lo + hi)
}

/// Minimizes the convex function `z -> ‖M - z 1‖` over complex `z` by
/// nested ternary search on the disc `|z| <= ‖M‖`.
pub fn general_deviation(m: MatRef<'_, C64>) -> Result<Accuracy> {
    let k = m.nrows();
    let radius = spectral_norm(m)?;
    let cost = |re: f64, im: f64| {
        let shifted = Mat::from_fn(k, k, |i, j| if i == j { m[(i, j)] - C64::new(re, im) } else { m[(i, j)] });
        spectral_norm(shifted.as_ref()).unwrap_or(f64::INFINITY)
    };
    let best_im = |re: f64| ternary(-radius, radius, |im| cost(re, im));
    let re = ternary(-radius, radius, |re| cost(re, best_im(re)));
    let im = best_im(re);
    Ok(Accuracy { deviation: cost(re, im), z_star: C64::new(re, im) })
}

/// Deviation of `P O(t) P` from a multiple of `P`, for a Pauli probe.
pub fn to_accuracy(
    code: &StabilizerCode,
    o: &PauliString,
    prop: &Propagator,
    t: f64,
    policy: NonHermitianPolicy,
) -> Result<Accuracy> {
    let evolved = evolved_basis(code, prop, t)?;
    let m = compress_pauli(o, evolved.as_ref(), code.num_qubits())?;
    if o.is_hermitian() {
        hermitian_deviation(m.as_ref())
    } else {
        match policy {
            NonHermitianPolicy::Reject => Err(Error::domain(format!("probe {o} is not Hermitian"))),
            NonHermitianPolicy::Minimize => general_deviation(m.as_ref()),
        }
    }
}
