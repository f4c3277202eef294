use faer::{Mat, MatRef};

use crate::error::{Error, Result};
use crate::lattice::SiteSet;
use crate::linalg;
use crate::models::HamiltonianTerms;
use crate::operators::{DenseOperator, StateVector};
use crate::C64;

/// Spectral decomposition `H = V diag(E) V†` used to evaluate `U(t) = exp(-iHt)`.
///
/// Each eigenvector is rotated so that its largest-magnitude component is
/// real and positive, which makes artifacts reproducible.
#[derive(Clone, Debug)]
pub struct Propagator {
    energies: Vec<f64>,
    vectors: Mat<C64>,
    num_sites: usize,
}

fn fix_phases(v: &mut Mat<C64>) {
    for k in 0..v.ncols() {
        let mut best = 0usize;
        for i in 0..v.nrows() {
            if v[(i, k)].norm() > v[(best, k)].norm() * (1.0 + 1e-12) {
                best = i;
            }
        }
        let p = v[(best, k)];
        if p.norm() == 0.0 {
            continue;
        }
        let phase = p.conj() / p.norm();
        for i in 0..v.nrows() {
            v[(i, k)] *= phase;
        }
    }
}

fn phases(energies: &[f64], t: f64, sign: f64) -> Vec<C64> {
    energies.iter().map(|&e| C64::from_polar(1.0, sign * e * t)).collect()
}

impl Propagator {
    pub fn new(h: &HamiltonianTerms) -> Result<Self> {
        Self::from_matrix(h.full_matrix()?.as_ref())
    }

    pub fn from_matrix(h: MatRef<'_, C64>) -> Result<Self> {
        let dim = h.nrows();
        if !dim.is_power_of_two() || h.ncols() != dim {
            return Err(Error::domain("propagator needs a square 2^N matrix"));
        }
        if !linalg::is_finite(h) {
            return Err(Error::domain("hamiltonian has non-finite entries"));
        }
        let (energies, mut vectors) = linalg::hermitian_eigen(h)?;
        fix_phases(&mut vectors);
        Ok(Propagator { energies, vectors, num_sites: dim.trailing_zeros() as usize })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn vectors(&self) -> MatRef<'_, C64> {
        self.vectors.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    /// `‖V diag(E) V† - H‖` in the largest-entry norm.
    pub fn reconstruction_error(&self, h: MatRef<'_, C64>) -> f64 {
        let d = self.dim();
        let scaled = Mat::from_fn(d, d, |i, k| self.vectors[(i, k)] * self.energies[k]);
        let back = &scaled * self.vectors.adjoint();
        linalg::max_abs_entry((&back - h).as_ref())
    }

    /// `U(t) = exp(-iHt)`.
    pub fn unitary(&self, t: f64) -> Mat<C64> {
        let ph = phases(&self.energies, t, -1.0);
        let d = self.dim();
        let scaled = Mat::from_fn(d, d, |i, k| self.vectors[(i, k)] * ph[k]);
        &scaled * self.vectors.adjoint()
    }

    /// `U(t) psi` for raw amplitudes.
    pub fn evolve_amplitudes(&self, psi: &[C64], t: f64) -> Result<Vec<C64>> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.len() });
        }
        let col = Mat::from_fn(psi.len(), 1, |i, _| psi[i]);
        let mut c = self.vectors.adjoint() * &col;
        for (k, p) in phases(&self.energies, t, -1.0).into_iter().enumerate() {
            c[(k, 0)] *= p;
        }
        let out = &self.vectors * &c;
        Ok((0..psi.len()).map(|i| out[(i, 0)]).collect())
    }

    /// `U(t) |psi>`.
    pub fn evolve_state(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        let amps = self.evolve_amplitudes(psi.amplitudes(), t)?;
        StateVector::normalized(amps)
    }

    /// `V† O V` for an operator given on any support inside the register.
    pub fn to_eigenbasis(&self, o: &DenseOperator) -> Result<EigenOperator> {
        let full = o.extend_to(&SiteSet::range(0, self.num_sites))?;
        let m = self.vectors.adjoint() * full.matrix() * &self.vectors;
        Ok(EigenOperator { m })
    }

    /// Heisenberg-picture `O(t) = U†(t) O U(t)` on the full register.
    pub fn heisenberg(&self, o: &DenseOperator, t: f64) -> Result<DenseOperator> {
        let eig = self.to_eigenbasis(o)?;
        DenseOperator::new(eig.at_time(self, t), SiteSet::range(0, self.num_sites))
    }
}

/// An operator expressed in the eigenbasis of a [`Propagator`], so that
/// repeated Heisenberg evolution only costs a phase multiply and two products.
#[derive(Clone, Debug)]
pub struct EigenOperator {
    m: Mat<C64>,
}

impl EigenOperator {
    pub fn matrix(&self) -> MatRef<'_, C64> {
        self.m.as_ref()
    }

    /// Eigenbasis matrix of `O(t)`: entries scaled by `exp(i (E_k - E_l) t)`.
    pub fn eigen_at_time(&self, prop: &Propagator, t: f64) -> Mat<C64> {
        let fwd = phases(&prop.energies, t, 1.0);
        Mat::from_fn(self.m.nrows(), self.m.ncols(), |k, l| self.m[(k, l)] * fwd[k] * fwd[l].conj())
    }

    /// `O(t)` in the computational basis.
    pub fn at_time(&self, prop: &Propagator, t: f64) -> Mat<C64> {
        let e = self.eigen_at_time(prop, t);
        &prop.vectors * e * prop.vectors.adjoint()
    }
}
