use faer::Mat;

use super::terms::HamiltonianTerms;
use crate::error::{Error, Result};
use crate::lattice::SiteSet;
use crate::linalg;
use crate::operators::DenseOperator;
use crate::C64;

/// `exp(-beta H) / tr exp(-beta H)` from a spectral decomposition.
///
/// Energies are shifted by the ground-state energy before exponentiation,
/// so large `beta ‖H‖` underflows excited weights instead of overflowing.
pub fn gibbs_from_spectrum(energies: &[f64], vectors: &Mat<C64>, beta: f64) -> Result<Mat<C64>> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::domain(format!("inverse temperature must be finite and non-negative, got {beta}")));
    }
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = energies.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = weights.iter().sum();
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::numerical("partition function is not finite"));
    }
    let scaled = Mat::from_fn(vectors.nrows(), vectors.ncols(), |i, k| vectors[(i, k)] * (weights[k] / z));
    Ok(&scaled * vectors.adjoint())
}

/// Gibbs state of `h` at inverse temperature `beta`.
pub fn build_gibbs(h: &HamiltonianTerms, beta: f64) -> Result<DenseOperator> {
    let all = SiteSet::range(0, h.num_sites());
    if beta == 0.0 {
        let d = h.dim();
        let m = Mat::from_fn(d, d, |i, j| C64::new(if i == j { 1.0 / d as f64 } else { 0.0 }, 0.0));
        return DenseOperator::new(m, all);
    }
    let full = h.full_matrix()?;
    let (energies, vectors) = linalg::hermitian_eigen(full.as_ref())?;
    DenseOperator::new(gibbs_from_spectrum(&energies, &vectors, beta)?, all)
}
