//! Bipartitions of the register and the terms that straddle them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SiteSet;
use crate::models::HamiltonianTerms;

/// `A | B` with `B` the complement of `A`, and the boundary terms of a
/// Hamiltonian: those acting nontrivially on both sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutSpec {
    pub a: SiteSet,
    pub b: SiteSet,
    /// Indices into the term list.
    pub boundary: Vec<usize>,
}

impl CutSpec {
    pub fn new(h: &HamiltonianTerms, a: SiteSet) -> Result<Self> {
        let n = h.num_sites();
        if a.is_empty() || a.len() >= n || a.max_site().is_some_and(|s| s >= n) {
            return Err(Error::domain(format!("cut side {a:?} must be a non-empty proper subset of {n} sites")));
        }
        let b = SiteSet::range(0, n).difference(&a);
        let boundary = h.crossing_terms(&a)?;
        Ok(CutSpec { a, b, boundary })
    }

    /// Left half `{0, .., n/2 - 1}` of a chain.
    pub fn left_half(h: &HamiltonianTerms) -> Result<Self> {
        Self::new(h, SiteSet::range(0, h.num_sites() / 2))
    }

    pub fn boundary_size(&self) -> usize {
        self.boundary.len()
    }

    /// `(H_A + H_B, H_∂)`.
    pub fn split(&self, h: &HamiltonianTerms) -> Result<(HamiltonianTerms, HamiltonianTerms)> {
        let pick = |inside: bool| {
            let terms = h
                .terms()
                .iter()
                .enumerate()
                .filter(|(k, _)| self.boundary.contains(k) == inside)
                .map(|(_, t)| t.clone())
                .collect();
            HamiltonianTerms::new(h.num_sites(), terms)
        };
        Ok((pick(false)?, pick(true)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::models::{build_hamiltonian, ModelSpec};

    #[test]
    fn chain_cut_has_one_bond() {
        let spec = ModelSpec::DisorderedXxz { j: 1.0, jz: 1.0, disorder: 1.0 };
        let h = build_hamiltonian(&spec, &Lattice::chain(6), 1).unwrap();
        let cut = CutSpec::left_half(&h).unwrap();
        assert_eq!(cut.boundary_size(), 1);
        let (inner, edge) = cut.split(&h).unwrap();
        assert_eq!(inner.len() + edge.len(), h.len());
        assert!(CutSpec::new(&h, SiteSet::range(0, 6)).is_err());
    }
}
