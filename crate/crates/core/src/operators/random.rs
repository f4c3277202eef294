//! Random matrices and states.

use faer::Mat;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::C64;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Mat<C64> {
    let mut m = Mat::<C64>::zeros(dim, dim);
    for j in 0..dim {
        for i in 0..dim {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of the
/// diagonal of `R` divided out.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Mat<C64> {
    let g = ginibre(dim, rng);
    let qr = g.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    let phases: Vec<C64> = (0..dim)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) }
        })
        .collect();
    Mat::from_fn(dim, dim, |i, j| q[(i, j)] * phases[j])
}

/// GUE-like Hermitian matrix `(G + G†) / 2`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Mat<C64> {
    let g = ginibre(dim, rng);
    Mat::from_fn(dim, dim, |i, j| (g[(i, j)] + g[(j, i)].conj()) * 0.5)
}

/// Random Hermitian matrix rescaled to unit spectral norm.
pub fn random_hermitian_unit<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Mat<C64> {
    let h = random_hermitian(dim, rng);
    let n = super::hermitian_norm(h.as_ref()).expect("small hermitian eigenproblem");
    Mat::from_fn(dim, dim, |i, j| h[(i, j)] / n)
}

/// Haar-random pure state amplitudes.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
    let n = super::state::l2(&v);
    v.iter_mut().for_each(|a| *a /= n);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::stream_rng;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = stream_rng(31, 0);
        let u = haar_unitary(8, &mut rng);
        let prod = u.adjoint() * &u;
        for i in 0..8 {
            for j in 0..8 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - C64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }
}
