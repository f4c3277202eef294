use std::collections::BTreeMap;
use std::fmt;

use faer::Mat;
use serde::{Deserialize, Serialize};

use super::DenseOperator;
use crate::error::{Error, Result};
use crate::lattice::SiteSet;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> Mat<C64> {
        let (o, l, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
        let entries = match self {
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        };
        Mat::from_fn(2, 2, |r, c| entries[r][c])
    }

    pub fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn signs(self) -> bool {
        matches!(self, Pauli::Y | Pauli::Z)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Tensor product of single-site Paulis times a complex coefficient.
///
/// Sites not in the map carry the identity; the empty map is the identity
/// operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliString {
    ops: BTreeMap<usize, Pauli>,
    coeff: C64,
}

impl PauliString {
    pub fn identity() -> Self {
        PauliString { ops: BTreeMap::new(), coeff: C64::new(1.0, 0.0) }
    }

    pub fn single(site: usize, kind: Pauli) -> Self {
        PauliString::from_ops([(site, kind)])
    }

    pub fn from_ops(ops: impl IntoIterator<Item = (usize, Pauli)>) -> Self {
        PauliString { ops: ops.into_iter().collect(), coeff: C64::new(1.0, 0.0) }
    }

    pub fn with_coeff(mut self, coeff: C64) -> Self {
        self.coeff = coeff;
        self
    }

    pub fn coeff(&self) -> C64 {
        self.coeff
    }

    pub fn ops(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        self.ops.iter().map(|(&s, &p)| (s, p))
    }

    pub fn get(&self, site: usize) -> Option<Pauli> {
        self.ops.get(&site).copied()
    }

    pub fn support(&self) -> SiteSet {
        self.ops.keys().copied().collect()
    }

    /// Hermitian iff the coefficient is real.
    pub fn is_hermitian(&self) -> bool {
        self.coeff.im == 0.0
    }

    /// Whether the two strings commute (coefficients aside).
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .ops
            .iter()
            .filter(|(s, p)| other.ops.get(s).is_some_and(|q| q != *p))
            .count();
        anti % 2 == 0
    }

    /// Bit masks and phase of the action on the computational basis of the
    /// qubits listed in `positions` order: `P|j> = phase * i^nY * (-1)^{|j & z|} |j ^ x>`.
    fn masks(&self, support: &SiteSet) -> Result<(usize, usize, C64)> {
        let mut x = 0usize;
        let mut z = 0usize;
        let mut phase = self.coeff;
        for (&site, &p) in &self.ops {
            let k = support
                .position(site)
                .ok_or_else(|| Error::domain(format!("pauli site {site} outside the target support")))?;
            if p.flips() {
                x |= 1 << k;
            }
            if p.signs() {
                z |= 1 << k;
            }
            if p == Pauli::Y {
                phase *= C64::new(0.0, 1.0);
            }
        }
        Ok((x, z, phase))
    }

    /// Applies the string to a state over the qubits of `support`.
    pub fn apply(&self, support: &SiteSet, v: &[C64]) -> Result<Vec<C64>> {
        let (x, z, phase) = self.masks(support)?;
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for (j, &amp) in v.iter().enumerate() {
            let sign = if (j & z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[j ^ x] = amp * phase * sign;
        }
        Ok(out)
    }

    /// Signed-permutation form on `support`: column `j` has its single
    /// non-zero entry `value[j]` in row `j ^ flip`.
    pub fn permutation_form(&self, support: &SiteSet) -> Result<(usize, Vec<C64>)> {
        let (x, z, phase) = self.masks(support)?;
        let dim = 1usize << support.len();
        let values = (0..dim)
            .map(|j| if (j & z).count_ones() % 2 == 1 { -phase } else { phase })
            .collect();
        Ok((x, values))
    }

    /// Matrix of the string on `support` (which must contain its sites).
    pub fn matrix_on(&self, support: &SiteSet) -> Result<DenseOperator> {
        crate::check_dense_size(support.len())?;
        let (x, values) = self.permutation_form(support)?;
        let dim = values.len();
        let mut m = Mat::<C64>::zeros(dim, dim);
        for (j, v) in values.into_iter().enumerate() {
            m[(j ^ x, j)] = v;
        }
        DenseOperator::new(m, support.clone())
    }

    /// Matrix on the string's own support.
    pub fn local_matrix(&self) -> DenseOperator {
        self.matrix_on(&self.support()).expect("own support contains every site")
    }

    /// Full matrix over `num_sites` qubits.
    pub fn embed(&self, num_sites: usize) -> Result<DenseOperator> {
        if let Some(max) = self.support().max_site() {
            if max >= num_sites {
                return Err(Error::domain(format!("pauli site {max} outside lattice of {num_sites} sites")));
            }
        }
        self.matrix_on(&SiteSet::range(0, num_sites))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ops.is_empty() {
            return write!(f, "I");
        }
        let parts: Vec<String> = self.ops.iter().map(|(s, p)| format!("{p}{s}")).collect();
        write!(f, "{}", parts.join("."))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kron(a: &Mat<C64>, b: &Mat<C64>) -> Mat<C64> {
        // b acts on the low bit
        let (ra, rb) = (a.nrows(), b.nrows());
        Mat::from_fn(ra * rb, ra * rb, |i, j| a[(i / rb, j / rb)] * b[(i % rb, j % rb)])
    }

    #[test]
    fn identity_string_embeds_to_identity() {
        let m = PauliString::identity().embed(3).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_eq!(m.matrix()[(i, j)], C64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn single_z() {
        let m = PauliString::single(0, Pauli::Z).embed(1).unwrap();
        assert_eq!(m.matrix()[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(m.matrix()[(1, 1)], C64::new(-1.0, 0.0));
    }

    #[test]
    fn two_site_string_matches_kronecker_loops() {
        for (a, b) in [(Pauli::X, Pauli::Z), (Pauli::Y, Pauli::X), (Pauli::Y, Pauli::Y)] {
            let p = PauliString::from_ops([(0, a), (1, b)]);
            let m = p.embed(2).unwrap();
            // qubit 1 is the high bit
            let oracle = kron(&b.matrix(), &a.matrix());
            for i in 0..4 {
                for j in 0..4 {
                    assert!((m.matrix()[(i, j)] - oracle[(i, j)]).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn commutation_rule() {
        let xz = PauliString::from_ops([(0, Pauli::X), (1, Pauli::Z)]);
        let zx = PauliString::from_ops([(0, Pauli::Z), (1, Pauli::X)]);
        let z0 = PauliString::single(0, Pauli::Z);
        assert!(xz.commutes_with(&zx));
        assert!(!xz.commutes_with(&z0));
    }

    #[test]
    fn out_of_range_site_is_rejected() {
        assert!(PauliString::single(4, Pauli::X).embed(3).is_err());
    }
}
