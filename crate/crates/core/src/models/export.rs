use faer::Mat;
use serde::{Deserialize, Serialize};

use super::terms::{HamiltonianTerms, LocalTerm};
use crate::error::{Error, Result};
use crate::lattice::SiteSet;
use crate::operators::DenseOperator;
use crate::C64;

/// JSON form of one term: support, anchor and row-major `[re, im]` entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportedTerm {
    pub support: Vec<usize>,
    pub anchor: Vec<usize>,
    pub entries: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExportedModel {
    pub num_sites: usize,
    pub terms: Vec<ExportedTerm>,
}

impl ExportedModel {
    pub fn from_terms(h: &HamiltonianTerms) -> Self {
        let terms = h
            .terms()
            .iter()
            .map(|t| {
                let m = t.op.matrix();
                let d = m.nrows();
                let entries = (0..d * d).map(|k| {
                    let z = m[(k / d, k % d)];
                    [z.re, z.im]
                });
                ExportedTerm {
                    support: t.op.support().as_slice().to_vec(),
                    anchor: t.anchor.as_slice().to_vec(),
                    entries: entries.collect(),
                }
            })
            .collect();
        ExportedModel { num_sites: h.num_sites(), terms }
    }

    pub fn to_terms(&self) -> Result<HamiltonianTerms> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let d = 1usize << t.support.len();
                if t.entries.len() != d * d {
                    return Err(Error::DimensionMismatch { expected: d * d, found: t.entries.len() });
                }
                let m = Mat::from_fn(d, d, |i, j| {
                    let [re, im] = t.entries[i * d + j];
                    C64::new(re, im)
                });
                Ok(LocalTerm { op: DenseOperator::new(m, SiteSet::new(t.support.clone()))?, anchor: SiteSet::new(t.anchor.clone()) })
            })
            .collect::<Result<Vec<_>>>()?;
        HamiltonianTerms::new(self.num_sites, terms)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::models::{build_hamiltonian, ModelSpec};

    #[test]
    fn export_reimports_exactly() {
        let spec = ModelSpec::DisorderedXxz { j: 1.0, jz: 0.5, disorder: 2.0 };
        let h = build_hamiltonian(&spec, &Lattice::chain(4), 8).unwrap();
        let json = ExportedModel::from_terms(&h).to_json().unwrap();
        let back: ExportedModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_terms().unwrap(), h);
    }
}
