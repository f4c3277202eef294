use faer::{Mat, MatRef};

use crate::error::{Error, Result};
use crate::lattice::SiteSet;
use crate::linalg::{self, scatter_table};
use crate::C64;

/// A square matrix acting on the qubits of an explicit support.
///
/// Local index bit `k` corresponds to the `k`-th smallest site of the
/// support. The empty support holds a `1 x 1` scalar.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    matrix: Mat<C64>,
    support: SiteSet,
}

impl PartialEq for DenseOperator {
    fn eq(&self, other: &Self) -> bool {
        self.support == other.support && self.matrix == other.matrix
    }
}

impl DenseOperator {
    pub fn new(matrix: Mat<C64>, support: SiteSet) -> Result<Self> {
        let expected = 1usize << support.len();
        if matrix.nrows() != expected || matrix.ncols() != expected {
            return Err(Error::DimensionMismatch { expected, found: matrix.nrows().max(matrix.ncols()) });
        }
        if !linalg::is_finite(matrix.as_ref()) {
            return Err(Error::domain("operator has non-finite entries"));
        }
        Ok(DenseOperator { matrix, support })
    }

    pub fn identity(support: SiteSet) -> Self {
        let d = 1usize << support.len();
        DenseOperator { matrix: Mat::identity(d, d), support }
    }

    pub fn zeros(support: SiteSet) -> Self {
        let d = 1usize << support.len();
        DenseOperator { matrix: Mat::zeros(d, d), support }
    }

    pub fn scalar(value: C64) -> Self {
        DenseOperator { matrix: Mat::from_fn(1, 1, |_, _| value), support: SiteSet::empty() }
    }

    pub fn matrix(&self) -> MatRef<'_, C64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> Mat<C64> {
        self.matrix
    }

    pub fn support(&self) -> &SiteSet {
        &self.support
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator { matrix: self.matrix.adjoint().to_owned(), support: self.support.clone() }
    }

    pub fn scale(&self, c: C64) -> Self {
        let matrix = Mat::from_fn(self.dim(), self.dim(), |i, j| self.matrix[(i, j)] * c);
        DenseOperator { matrix, support: self.support.clone() }
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(self.matrix.as_ref())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// The same operator written on a larger support (tensored with identity).
    pub fn extend_to(&self, target: &SiteSet) -> Result<Self> {
        if &self.support == target {
            return Ok(self.clone());
        }
        crate::check_dense_size(target.len())?;
        let d = 1usize << target.len();
        let mut out = Mat::<C64>::zeros(d, d);
        self.accumulate_into(&mut out, target, C64::new(1.0, 0.0))?;
        Ok(DenseOperator { matrix: out, support: target.clone() })
    }

    /// `target += scale * (self ⊗ 1)` where `target` lives on `target_support`.
    pub fn accumulate_into(&self, target: &mut Mat<C64>, target_support: &SiteSet, scale: C64) -> Result<()> {
        let own = self
            .support
            .positions_in(target_support)
            .ok_or_else(|| Error::domain("target support does not contain the operator support"))?;
        let expected = 1usize << target_support.len();
        if target.nrows() != expected {
            return Err(Error::DimensionMismatch { expected, found: target.nrows() });
        }
        let rest: Vec<usize> = (0..target_support.len()).filter(|k| !own.contains(k)).collect();
        let own_table = scatter_table(&own);
        let rest_table = scatter_table(&rest);
        let local = self.dim();
        for j in 0..local {
            for i in 0..local {
                let v = self.matrix[(i, j)] * scale;
                if v == C64::new(0.0, 0.0) {
                    continue;
                }
                for &r in &rest_table {
                    target[(r | own_table[i], r | own_table[j])] += v;
                }
            }
        }
        Ok(())
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        let support = self.support.union(&other.support);
        Ok((self.extend_to(&support)?, other.extend_to(&support)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        Ok(DenseOperator { matrix: &a.matrix + &b.matrix, support: a.support })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        Ok(DenseOperator { matrix: &a.matrix - &b.matrix, support: a.support })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        Ok(DenseOperator { matrix: &a.matrix * &b.matrix, support: a.support })
    }

    /// `[self, other]` on the union of the supports.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let matrix = &a.matrix * &b.matrix - &b.matrix * &a.matrix;
        Ok(DenseOperator { matrix, support: a.support })
    }

    /// `G O G†` for a gate `G` acting on `sites`; the support grows to
    /// include them.
    pub fn conjugate_by(&self, gate: MatRef<'_, C64>, sites: &SiteSet) -> Result<Self> {
        let support = self.support.union(sites);
        let me = self.extend_to(&support)?;
        let positions = sites.positions_in(&support).expect("union contains the gate sites");
        let matrix = linalg::conjugate_local(&me.matrix, gate, &positions);
        Ok(DenseOperator { matrix, support })
    }

    /// Applies the operator to a state over `num_sites` qubits.
    pub fn apply_to(&self, v: &[C64], out: &mut [C64]) {
        let positions = self.support.as_slice();
        let local = self.dim();
        let table = scatter_table(positions);
        let mask = table[local - 1];
        let mut buf = vec![C64::new(0.0, 0.0); local];
        for base in 0..v.len() {
            if base & mask != 0 {
                continue;
            }
            for (l, slot) in buf.iter_mut().enumerate() {
                *slot = v[base | table[l]];
            }
            for a in 0..local {
                let mut acc = C64::new(0.0, 0.0);
                for (b, x) in buf.iter().enumerate() {
                    acc += self.matrix[(a, b)] * x;
                }
                out[base | table[a]] += acc;
            }
        }
    }

    /// Largest entry of `self - other` after aligning supports.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(linalg::max_abs_entry(self.sub(other)?.matrix()))
    }
}
