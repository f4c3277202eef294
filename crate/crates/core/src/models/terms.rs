use faer::Mat;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, SiteSet};
use crate::operators::{hermitian_norm, trace_out, DenseOperator};
use crate::C64;

/// Hermiticity tolerance for every term.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// One local term `h_j` of a Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalTerm {
    pub op: DenseOperator,
    /// Sites the term is centred on; truncations are measured from here.
    pub anchor: SiteSet,
}

impl LocalTerm {
    /// Term anchored on its own support.
    pub fn on_support(op: DenseOperator) -> Self {
        let anchor = op.support().clone();
        LocalTerm { op, anchor }
    }
}

/// `H = sum_j h_j` over a register of `num_sites` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianTerms {
    num_sites: usize,
    terms: Vec<LocalTerm>,
}

impl HamiltonianTerms {
    pub fn new(num_sites: usize, terms: Vec<LocalTerm>) -> Result<Self> {
        for (k, t) in terms.iter().enumerate() {
            if t.op.support().max_site().is_some_and(|s| s >= num_sites) {
                return Err(Error::domain(format!("term {k} acts outside the {num_sites}-site register")));
            }
            let defect = t.op.hermiticity_defect();
            if defect > HERMITIAN_TOL {
                return Err(Error::Invariant(format!("term {k} is not Hermitian (defect {defect:.3e})")));
            }
        }
        Ok(HamiltonianTerms { num_sites, terms })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn dim(&self) -> usize {
        1 << self.num_sites
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms selected by a predicate, on the same register.
    pub fn filtered(&self, keep: impl Fn(&LocalTerm) -> bool) -> HamiltonianTerms {
        HamiltonianTerms { num_sites: self.num_sites, terms: self.terms.iter().filter(|t| keep(t)).cloned().collect() }
    }

    /// Concatenation of two term lists with `other` scaled by `s`.
    pub fn plus_scaled(&self, other: &HamiltonianTerms, s: f64) -> Result<HamiltonianTerms> {
        if other.num_sites != self.num_sites {
            return Err(Error::DimensionMismatch { expected: self.num_sites, found: other.num_sites });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|t| LocalTerm { op: t.op.scale(C64::new(s, 0.0)), anchor: t.anchor.clone() }));
        Ok(HamiltonianTerms { num_sites: self.num_sites, terms })
    }

    /// Dense `2^N x 2^N` matrix.
    pub fn full_matrix(&self) -> Result<Mat<C64>> {
        crate::check_dense_size(self.num_sites)?;
        let all = SiteSet::range(0, self.num_sites);
        let mut h = Mat::<C64>::zeros(self.dim(), self.dim());
        for t in &self.terms {
            t.op.accumulate_into(&mut h, &all, C64::new(1.0, 0.0))?;
        }
        Ok(h)
    }

    /// `out = H v` without forming `H`.
    pub fn apply(&self, v: &[C64], out: &mut [C64]) -> Result<()> {
        if v.len() != self.dim() || out.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len().max(out.len()) });
        }
        out.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
        for t in &self.terms {
            t.op.apply_to(v, out);
        }
        Ok(())
    }

    /// Norms `‖h_j‖` of the individual terms.
    pub fn term_norms(&self) -> Result<Vec<f64>> {
        self.terms.iter().map(|t| hermitian_norm(t.op.matrix())).collect()
    }

    /// `J = max_j ‖h_j‖`.
    pub fn j_max(&self) -> Result<f64> {
        Ok(self.term_norms()?.into_iter().fold(0.0, f64::max))
    }

    /// Largest support diameter over the terms.
    pub fn max_diameter(&self, lattice: &Lattice) -> usize {
        self.terms.iter().map(|t| lattice.diam(t.op.support())).max().unwrap_or(0)
    }

    /// Indices of the terms that act nontrivially on both `a` and its
    /// complement, i.e. that are not a sum of an operator on `a` and one off
    /// `a`.
    pub fn crossing_terms(&self, a: &SiteSet) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (k, t) in self.terms.iter().enumerate() {
            let s = t.op.support();
            let (in_a, off_a) = (s.intersection(a), s.difference(a));
            if in_a.is_empty() || off_a.is_empty() {
                continue;
            }
            let one = C64::new(1.0, 0.0);
            let mut rest = t.op.matrix().to_owned();
            trace_out(&t.op, &off_a, true).accumulate_into(&mut rest, s, -one)?;
            trace_out(&t.op, &in_a, true).accumulate_into(&mut rest, s, -one)?;
            let mean = t.op.trace() / t.op.dim() as f64;
            for i in 0..rest.nrows() {
                rest[(i, i)] += mean;
            }
            if crate::linalg::max_abs_entry(rest.as_ref()) > HERMITIAN_TOL {
                out.push(k);
            }
        }
        Ok(out)
    }

    /// `<psi|H|psi>`.
    pub fn energy(&self, psi: &[C64]) -> Result<f64> {
        let mut out = vec![C64::new(0.0, 0.0); psi.len()];
        self.apply(psi, &mut out)?;
        Ok(psi.iter().zip(&out).map(|(a, b)| (a.conj() * b).re).sum())
    }
}
