//! The phenomenological l-bit model.
//!
//! Diagonal couplings on `Z` operators are drawn first and grouped into
//! operators `D_j` by their leftmost site. A layered circuit `W` of two-site
//! rotations then dresses them: `h~_j = W D_j W†`. Conjugating commuting
//! diagonals by one unitary keeps every commutator exactly zero, while the
//! exponentially shrinking rotation angles keep the dressed operators
//! quasi-local.

use faer::Mat;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::terms::{HamiltonianTerms, LocalTerm};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, SiteSet};
use crate::linalg;
use crate::operators::random::random_hermitian_unit;
use crate::operators::{commutator_norm, pauli_commutator_norm, DenseOperator, Pauli};
use crate::seeding::{rng_from_seed, stream_rng};
use crate::C64;

/// Parameters of the l-bit model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LbitSpec {
    /// Decay length `xi'` of couplings and dressing angles (lattice units).
    pub xi: f64,
    /// Couplings act on sets of diameter strictly below `range`.
    pub range: usize,
    /// Number of brickwork layers in the dressing circuit.
    pub depth: usize,
    /// Rotation angle scale of the first layer.
    pub angle: f64,
    /// On-site fields are drawn from `U[-field, field]`.
    pub field: f64,
    /// Overall scale `J` of the multi-site couplings.
    pub coupling: f64,
}

impl Default for LbitSpec {
    fn default() -> Self {
        LbitSpec { xi: 0.5, range: 3, depth: 4, angle: 0.5, field: 1.0, coupling: 1.0 }
    }
}

impl LbitSpec {
    /// Weakly dressed variant used as a localized perturbation of codes.
    pub fn perturbation_default() -> Self {
        LbitSpec { xi: 0.5, range: 2, depth: 2, angle: 0.2, field: 1.0, coupling: 0.5 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.xi.is_finite() && self.xi > 0.0) {
            return Err(Error::Config(format!("model.xi must be positive, got {}", self.xi)));
        }
        if self.range == 0 {
            return Err(Error::Config("model.range must be at least 1".into()));
        }
        for (name, v) in [("angle", self.angle), ("field", self.field), ("coupling", self.coupling)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!("model.{name} must be finite and non-negative, got {v}")));
            }
        }
        Ok(())
    }
}

/// One two-site rotation `exp(-i angle G)` of the dressing circuit.
#[derive(Clone, Debug)]
pub struct DressingGate {
    pub layer: usize,
    pub sites: SiteSet,
    pub angle: f64,
    pub unitary: Mat<C64>,
}

/// A realized l-bit Hamiltonian with its integrals of motion.
#[derive(Clone, Debug)]
pub struct LbitRealization {
    pub spec: LbitSpec,
    pub fields: Vec<f64>,
    /// Multi-site couplings `(S, J_S)` on `prod_{s in S} Z_s`.
    pub couplings: Vec<(SiteSet, f64)>,
    /// Undressed diagonal operators `D_j`.
    pub diagonal: Vec<DenseOperator>,
    /// Dressed integrals of motion `h~_j`; `H` is their sum.
    pub conserved: Vec<DenseOperator>,
    pub gates: Vec<DressingGate>,
    pub terms: HamiltonianTerms,
}

/// Tolerance of the commutation check performed at construction.
pub const COMMUTATION_TOL: f64 = 1e-10;

fn uniform<R: Rng>(rng: &mut R, scale: f64) -> f64 {
    if scale == 0.0 {
        // keep the stream aligned whatever the scale
        let _: f64 = rng.random();
        0.0
    } else {
        scale * (2.0 * rng.random::<f64>() - 1.0)
    }
}

fn diagonal_operator(site: usize, field: f64, couplings: &[(SiteSet, f64)]) -> Result<DenseOperator> {
    let support = couplings.iter().fold(SiteSet::singleton(site), |acc, (s, _)| acc.union(s));
    let own = support.position(site).expect("anchor is in the support");
    let masks: Vec<(usize, f64)> = couplings
        .iter()
        .map(|(s, j)| {
            let pos = s.positions_in(&support).expect("coupling sites are in the support");
            (pos.iter().fold(0usize, |m, p| m | (1 << p)), *j)
        })
        .collect();
    let d = 1usize << support.len();
    let mut m = Mat::<C64>::zeros(d, d);
    for b in 0..d {
        let z = |mask: usize| if (b & mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        let value = field * z(1 << own) + masks.iter().map(|&(mask, j)| j * z(mask)).sum::<f64>();
        m[(b, b)] = C64::new(value, 0.0);
    }
    DenseOperator::new(m, support)
}

/// Builds an l-bit realization on `lattice` from `seed`.
pub fn build_lbit(spec: &LbitSpec, lattice: &Lattice, seed: u64) -> Result<LbitRealization> {
    spec.validate()?;
    let n = lattice.num_sites();
    crate::check_dense_size(n)?;
    let mut rng = rng_from_seed(seed);

    let fields: Vec<f64> = (0..n).map(|_| uniform(&mut rng, spec.field)).collect();

    let mut couplings = Vec::new();
    for i in 0..n {
        let near: Vec<usize> = ((i + 1)..n).filter(|&j| lattice.site_distance(i, j) < spec.range).collect();
        let mut sets: Vec<SiteSet> = near.iter().map(|&j| SiteSet::new([i, j])).collect();
        for (a, &j) in near.iter().enumerate() {
            for &k in &near[a + 1..] {
                if lattice.site_distance(j, k) < spec.range {
                    sets.push(SiteSet::new([i, j, k]));
                }
            }
        }
        for s in sets {
            let decay = (-(lattice.diam(&s) as f64) / spec.xi).exp();
            let j = uniform(&mut rng, spec.coupling) * decay;
            couplings.push((s, j));
        }
    }

    let colors = lattice.bond_colors();
    let mut gates = Vec::new();
    for layer in 0..spec.depth {
        let theta = spec.angle * (-(layer as f64) / spec.xi).exp();
        for group in &colors {
            for &(a, b) in group {
                let angle = theta * (2.0 * rng.random::<f64>() - 1.0);
                let g = random_hermitian_unit(4, &mut rng);
                let unitary = linalg::unitary_exp(g.as_ref(), angle)?;
                gates.push(DressingGate { layer, sites: SiteSet::new([a, b]), angle, unitary });
            }
        }
    }

    let diagonal: Vec<DenseOperator> = (0..n)
        .map(|j| {
            let own: Vec<(SiteSet, f64)> =
                couplings.iter().filter(|(s, _)| s.min_site() == Some(j)).cloned().collect();
            diagonal_operator(j, fields[j], &own)
        })
        .collect::<Result<_>>()?;

    let conserved: Vec<DenseOperator> =
        diagonal.iter().map(|d| dress_with(&gates, d)).collect::<Result<_>>()?;

    let terms = HamiltonianTerms::new(
        n,
        conserved
            .iter()
            .enumerate()
            .map(|(j, op)| LocalTerm { op: op.clone(), anchor: SiteSet::singleton(j) })
            .collect(),
    )?;

    let real = LbitRealization { spec: spec.clone(), fields, couplings, diagonal, conserved, gates, terms };
    let defect = real.commutation_probe(seed)?;
    if defect > COMMUTATION_TOL {
        return Err(Error::Invariant(format!("l-bit operators fail to commute (probe residual {defect:.3e})")));
    }
    Ok(real)
}

fn dress_with(gates: &[DressingGate], op: &DenseOperator) -> Result<DenseOperator> {
    let mut out = op.clone();
    for g in gates {
        if g.sites.intersects(out.support()) {
            out = out.conjugate_by(g.unitary.as_ref(), &g.sites)?;
        }
    }
    Ok(out)
}

impl LbitRealization {
    pub fn num_sites(&self) -> usize {
        self.terms.num_sites()
    }

    /// `W O W†`.
    pub fn dress(&self, op: &DenseOperator) -> Result<DenseOperator> {
        dress_with(&self.gates, op)
    }

    /// Dressed `Z_j`, the l-bit operator `tau^z_j`.
    pub fn tau_z(&self, j: usize) -> Result<DenseOperator> {
        self.dress(&crate::operators::PauliString::single(j, Pauli::Z).local_matrix())
    }

    /// Largest `‖[A, B] v‖` over overlapping pairs of integrals of motion and
    /// a few random unit vectors. Cheap stand-in for the spectral check.
    pub fn commutation_probe(&self, seed: u64) -> Result<f64> {
        let n = self.num_sites();
        let dim = 1usize << n;
        let mut rng = stream_rng(seed, 0xC0_u64);
        let vectors: Vec<Vec<C64>> = (0..2).map(|_| crate::operators::random::random_state(dim, &mut rng)).collect();
        let apply = |op: &DenseOperator, v: &[C64]| {
            let mut out = vec![C64::new(0.0, 0.0); dim];
            op.apply_to(v, &mut out);
            out
        };
        let mut worst = 0.0f64;
        for (i, a) in self.conserved.iter().enumerate() {
            for b in &self.conserved[i + 1..] {
                if !a.support().intersects(b.support()) {
                    continue;
                }
                for v in &vectors {
                    let ab = apply(a, &apply(b, v));
                    let ba = apply(b, &apply(a, v));
                    let r = ab.iter().zip(&ba).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
                    worst = worst.max(r);
                }
            }
        }
        Ok(worst)
    }

    /// Exact largest `‖[h~_i, h~_j]‖` and `‖[H, h~_j]‖`.
    pub fn exact_commutation_defect(&self) -> Result<f64> {
        let all = SiteSet::range(0, self.num_sites());
        let h = DenseOperator::new(self.terms.full_matrix()?, all)?;
        let mut worst = 0.0f64;
        for (i, a) in self.conserved.iter().enumerate() {
            worst = worst.max(commutator_norm(&h, a)?);
            for b in &self.conserved[i + 1..] {
                worst = worst.max(commutator_norm(a, b)?);
            }
        }
        Ok(worst)
    }
}

/// One row of the quasi-locality profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub j: usize,
    pub d: usize,
    /// `max ‖[h~_j, P_i]‖` over single-site Paulis at distance `d` from `j`.
    pub value: f64,
}

/// Tail of every integral of motion as seen by single-site Pauli probes.
pub fn quasi_locality_profile(real: &LbitRealization, lattice: &Lattice) -> Result<Vec<ProfileRow>> {
    let mut rows = Vec::new();
    for (j, op) in real.conserved.iter().enumerate() {
        let mut best = vec![0.0f64; lattice.diameter() + 1];
        for i in 0..lattice.num_sites() {
            let d = lattice.site_distance(i, j);
            for kind in Pauli::ALL {
                best[d] = best[d].max(pauli_commutator_norm(op, i, kind)?);
            }
        }
        rows.extend(best.into_iter().enumerate().map(|(d, value)| ProfileRow { j, d, value }));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::hermitian_norm;

    #[test]
    fn undressed_single_site_model_is_diagonal() {
        let spec = LbitSpec { depth: 0, range: 1, ..LbitSpec::default() };
        let lattice = Lattice::chain(4);
        let real = build_lbit(&spec, &lattice, 5).unwrap();
        assert!(real.couplings.is_empty());
        for (j, op) in real.conserved.iter().enumerate() {
            assert_eq!(op.support(), &SiteSet::singleton(j));
            assert!((op.matrix()[(0, 0)].re - real.fields[j]).abs() < 1e-15);
            assert!((op.matrix()[(1, 1)].re + real.fields[j]).abs() < 1e-15);
        }
        let h = real.terms.full_matrix().unwrap();
        assert!((0..16).all(|i| (0..16).all(|k| i == k || h[(i, k)].norm() == 0.0)));
        let profile = quasi_locality_profile(&real, &lattice).unwrap();
        assert!(profile.iter().filter(|r| r.d >= 1).all(|r| r.value == 0.0));
    }

    #[test]
    fn integrals_of_motion_commute_exactly() {
        let lattice = Lattice::chain(6);
        let real = build_lbit(&LbitSpec::default(), &lattice, 9).unwrap();
        assert!(real.exact_commutation_defect().unwrap() <= COMMUTATION_TOL);
    }

    #[test]
    fn profile_at_zero_distance_is_bounded() {
        let lattice = Lattice::chain(5);
        let real = build_lbit(&LbitSpec::default(), &lattice, 3).unwrap();
        let profile = quasi_locality_profile(&real, &lattice).unwrap();
        for row in profile.iter().filter(|r| r.d == 0) {
            let norm = hermitian_norm(real.conserved[row.j].matrix()).unwrap();
            assert!(row.value <= 2.0 * norm + 1e-12);
        }
    }

    #[test]
    fn same_seed_same_model() {
        let lattice = Lattice::chain(5);
        let a = build_lbit(&LbitSpec::default(), &lattice, 17).unwrap();
        let b = build_lbit(&LbitSpec::default(), &lattice, 17).unwrap();
        assert_eq!(a.terms, b.terms);
    }
}
