//! Matrix-free Lanczos propagation `psi(t) = exp(-iHt) psi`.

use faer::Mat;

use crate::error::{Error, Result};
use crate::models::HamiltonianTerms;
use crate::operators::StateVector;
use crate::linalg;
use crate::C64;

/// Local error target per accepted step.
pub const STEP_TOL: f64 = 1e-10;

const BREAKDOWN: f64 = 1e-13;

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

struct Lanczos {
    basis: Vec<Vec<C64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// `beta_m`, the coupling out of the subspace; 0 on happy breakdown.
    residual: f64,
}

fn lanczos(h: &HamiltonianTerms, v0: &[C64], k: usize) -> Result<Lanczos> {
    let n0 = norm(v0);
    let mut basis = vec![v0.iter().map(|x| x / n0).collect::<Vec<_>>()];
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut w = vec![C64::new(0.0, 0.0); v0.len()];
    loop {
        let j = basis.len() - 1;
        h.apply(&basis[j], &mut w)?;
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        // full reorthogonalization, twice for stability
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = norm(&w);
        if b < BREAKDOWN || basis.len() == k {
            return Ok(Lanczos { basis, alpha, beta, residual: if b < BREAKDOWN { 0.0 } else { b } });
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
}

/// Coefficients `exp(-i tau T) e_1` of the tridiagonal Lanczos matrix.
fn small_exp(alpha: &[f64], beta: &[f64], tau: f64) -> Result<Vec<C64>> {
    let m = alpha.len();
    let t = Mat::<f64>::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let (values, vectors) = linalg::symmetric_eigen(t.as_ref())?;
    Ok((0..m)
        .map(|i| {
            (0..m)
                .map(|k| C64::from_polar(vectors[(i, k)] * vectors[(0, k)], -values[k] * tau))
                .sum()
        })
        .collect())
}

/// Evolves `psi` to time `t` with Krylov subspaces of dimension at most `k`.
///
/// Steps shrink until the a-posteriori estimate `beta_m |c_m|` is below
/// [`STEP_TOL`]; after an accepted step the next one is tried 1.5 times
/// longer. A step that keeps shrinking below `1e-12 |t|` is a failure.
pub fn krylov_evolve(h: &HamiltonianTerms, psi: &StateVector, t: f64, k: usize) -> Result<StateVector> {
    if psi.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: psi.dim() });
    }
    if k < 2 {
        return Err(Error::domain("krylov dimension must be at least 2"));
    }
    let mut v = psi.amplitudes().to_vec();
    if t == 0.0 {
        return StateVector::normalized(v);
    }
    let direction = t.signum();
    let total = t.abs();
    let mut done = 0.0;
    let mut tau = total.min(1.0);
    while done < total {
        let lz = lanczos(h, &v, k)?;
        if lz.residual == 0.0 {
            // invariant subspace: the remaining interval is exact
            tau = total - done;
        }
        loop {
            tau = tau.min(total - done);
            let c = small_exp(&lz.alpha, &lz.beta, direction * tau)?;
            let err = lz.residual * c.last().map_or(0.0, |x| x.norm());
            if err <= STEP_TOL {
                let mut next = vec![C64::new(0.0, 0.0); v.len()];
                for (q, ci) in lz.basis.iter().zip(&c) {
                    next.iter_mut().zip(q).for_each(|(x, y)| *x += ci * y);
                }
                let scale = norm(&v);
                next.iter_mut().for_each(|x| *x *= scale);
                v = next;
                done += tau;
                tau *= 1.5;
                break;
            }
            tau *= 0.5;
            if tau < 1e-12 * total {
                return Err(Error::numerical("krylov step size collapsed"));
            }
        }
    }
    StateVector::normalized(v)
}
