use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Lattice, SiteSet};
use crate::linalg;
use crate::models::{build_lbit, HamiltonianTerms, LbitSpec, LocalTerm};
use crate::operators::{DenseOperator, Pauli, PauliString};
use crate::seeding::rng_from_seed;
use crate::C64;

/// Supported codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CodeKind {
    /// Bit-flip repetition code on a chain, stabilizers `Z_i Z_{i+1}`.
    Repetition { length: usize },
    /// Toric code on a 2 x 2 torus: 8 edge qubits, 4 stars and 4 plaquettes.
    #[serde(rename = "toric-2x2")]
    Toric2x2,
}

/// Kind of the perturbation `V` in `H_s = H_0 + s V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationKind {
    /// Mutually commuting dressed diagonal terms (an l-bit model). The
    /// diagonals are `Z` products for the repetition code and stabilizer
    /// products for the toric code.
    LbitLike,
    /// Random transverse and longitudinal single-site fields.
    Ergodic,
}

impl PerturbationKind {
    pub fn name(self) -> &'static str {
        match self {
            PerturbationKind::LbitLike => "lbit-like",
            PerturbationKind::Ergodic => "ergodic",
        }
    }
}

/// A stabilizer code with its projector and an orthonormal code-space basis.
#[derive(Clone, Debug)]
pub struct StabilizerCode {
    kind: CodeKind,
    num_qubits: usize,
    generators: Vec<PauliString>,
    logicals: Vec<(String, PauliString)>,
    projector: DenseOperator,
    basis: Mat<C64>,
    distance: usize,
}

impl StabilizerCode {
    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn logicals(&self) -> &[(String, PauliString)] {
        &self.logicals
    }

    /// `P = prod_j (1 + S_j) / 2` on the full register.
    pub fn projector(&self) -> &DenseOperator {
        &self.projector
    }

    /// Columns span the range of `P`.
    pub fn basis(&self) -> &Mat<C64> {
        &self.basis
    }

    pub fn code_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Code distance, used as the protected length scale.
    pub fn distance(&self) -> usize {
        self.distance
    }

    /// `H_0 = -gap * sum_j S_j`, one term per generator.
    pub fn ideal_hamiltonian(&self, gap: f64) -> Result<HamiltonianTerms> {
        let terms = self
            .generators
            .iter()
            .map(|s| LocalTerm::on_support(s.local_matrix().scale(C64::new(-gap, 0.0))))
            .collect();
        HamiltonianTerms::new(self.num_qubits, terms)
    }
}

fn toric_2x2() -> (Vec<PauliString>, Vec<(String, PauliString)>) {
    // vertices (x, y) on a 2 x 2 torus; edge h(x, y) joins (x, y)-(x+1, y),
    // edge v(x, y) joins (x, y)-(x, y+1)
    let h = |x: usize, y: usize| 2 * ((y % 2) * 2 + (x % 2));
    let v = |x: usize, y: usize| 2 * ((y % 2) * 2 + (x % 2)) + 1;
    let mut generators = Vec::new();
    for y in 0..2 {
        for x in 0..2 {
            let star = [h(x, y), h(x + 1, y), v(x, y), v(x, y + 1)];
            generators.push(PauliString::from_ops(star.map(|q| (q, Pauli::X))));
        }
    }
    for y in 0..2 {
        for x in 0..2 {
            let plaquette = [h(x, y), h(x, y + 1), v(x, y), v(x + 1, y)];
            generators.push(PauliString::from_ops(plaquette.map(|q| (q, Pauli::Z))));
        }
    }
    let logicals = vec![
        ("Z1".to_string(), PauliString::from_ops([(h(0, 0), Pauli::Z), (h(1, 0), Pauli::Z)])),
        ("X1".to_string(), PauliString::from_ops([(h(0, 0), Pauli::X), (h(0, 1), Pauli::X)])),
        ("Z2".to_string(), PauliString::from_ops([(v(0, 0), Pauli::Z), (v(0, 1), Pauli::Z)])),
        ("X2".to_string(), PauliString::from_ops([(v(0, 0), Pauli::X), (v(1, 0), Pauli::X)])),
    ];
    (generators, logicals)
}

/// Builds the code, its projector and code-space basis, and checks the
/// stabilizer invariants.
pub fn build_code(kind: &CodeKind) -> Result<StabilizerCode> {
    let (num_qubits, generators, logicals, distance) = match *kind {
        CodeKind::Repetition { length } => {
            if length < 2 {
                return Err(Error::Config("repetition code needs at least 2 qubits".into()));
            }
            crate::check_dense_size(length)?;
            let gens = (0..length - 1)
                .map(|i| PauliString::from_ops([(i, Pauli::Z), (i + 1, Pauli::Z)]))
                .collect();
            let logicals = vec![
                ("X".to_string(), PauliString::from_ops((0..length).map(|i| (i, Pauli::X)))),
                ("Z".to_string(), PauliString::single(0, Pauli::Z)),
            ];
            (length, gens, logicals, length)
        }
        CodeKind::Toric2x2 => {
            let (g, l) = toric_2x2();
            (8, g, l, 2)
        }
    };
    for (a, s) in generators.iter().enumerate() {
        for t in &generators[a + 1..] {
            if !s.commutes_with(t) {
                return Err(Error::Invariant(format!("stabilizers {s} and {t} anticommute")));
            }
        }
    }
    let all = SiteSet::range(0, num_qubits);
    let d = 1usize << num_qubits;
    let mut p = Mat::<C64>::identity(d, d);
    for s in &generators {
        let (flip, values) = s.permutation_form(&all)?;
        let sp = Mat::from_fn(d, d, |i, j| values[i ^ flip] * p[(i ^ flip, j)]);
        p = Mat::from_fn(d, d, |i, j| (p[(i, j)] + sp[(i, j)]) * 0.5);
    }
    let (values, vectors) = linalg::hermitian_eigen(p.as_ref())?;
    let keep: Vec<usize> = (0..d).filter(|&k| values[k] > 0.5).collect();
    let basis = Mat::from_fn(d, keep.len(), |i, c| vectors[(i, keep[c])]);
    let projector = DenseOperator::new(p, all)?;
    Ok(StabilizerCode { kind: *kind, num_qubits, generators, logicals, projector, basis, distance })
}

/// The perturbation `V` on the code qubits, laid out as a chain.
pub fn perturbation_terms(
    code: &StabilizerCode,
    kind: PerturbationKind,
    dressing: &LbitSpec,
    seed: u64,
) -> Result<HamiltonianTerms> {
    let n = code.num_qubits();
    match kind {
        PerturbationKind::LbitLike => match code.kind() {
            CodeKind::Repetition { .. } => Ok(build_lbit(dressing, &Lattice::chain(n), seed)?.terms),
            CodeKind::Toric2x2 => stabilizer_lbits(code, dressing, seed),
        },
        PerturbationKind::Ergodic => {
            use rand::Rng;
            let mut rng = rng_from_seed(seed);
            let terms = (0..n)
                .map(|i| {
                    let a = 2.0 * rng.random::<f64>() - 1.0;
                    let b = 2.0 * rng.random::<f64>() - 1.0;
                    let support = SiteSet::singleton(i);
                    let x = PauliString::single(i, Pauli::X).matrix_on(&support)?;
                    let z = PauliString::single(i, Pauli::Z).matrix_on(&support)?;
                    Ok(LocalTerm::on_support(x.scale(C64::new(a, 0.0)).add(&z.scale(C64::new(b, 0.0)))?))
                })
                .collect::<Result<Vec<_>>>()?;
            HamiltonianTerms::new(n, terms)
        }
    }
}

/// Dressed l-bits whose undressed diagonals are functions of the
/// stabilizers: random weights on every generator and on every product of two
/// generators that share a qubit. The dressing circuit is the one of an l-bit
/// chain on the same qubits.
fn stabilizer_lbits(code: &StabilizerCode, dressing: &LbitSpec, seed: u64) -> Result<HamiltonianTerms> {
    use rand::Rng;
    let n = code.num_qubits();
    let circuit = build_lbit(dressing, &Lattice::chain(n), seed)?;
    let mut rng = rng_from_seed(crate::seeding::derive_seed(seed, 1));
    let mut uniform = |scale: f64| scale * (2.0 * rng.random::<f64>() - 1.0);
    let pair_weight = (-1.0 / dressing.xi).exp();
    let gens = code.generators();
    let mut terms = Vec::new();
    for (a, g) in gens.iter().enumerate() {
        let mut diag = g.local_matrix().scale(C64::new(uniform(dressing.field), 0.0));
        for h in &gens[a + 1..] {
            if g.support().intersects(&h.support()) {
                let product = g.local_matrix().mul(&h.local_matrix())?;
                diag = diag.add(&product.scale(C64::new(uniform(dressing.coupling) * pair_weight, 0.0)))?;
            }
        }
        let anchor = g.support();
        terms.push(LocalTerm { op: circuit.dress(&diag)?, anchor });
    }
    HamiltonianTerms::new(n, terms)
}

/// `H_s = -gap sum_j S_j + s V`.
pub fn perturbed_hamiltonian(
    code: &StabilizerCode,
    gap: f64,
    strength: f64,
    kind: PerturbationKind,
    dressing: &LbitSpec,
    seed: u64,
) -> Result<HamiltonianTerms> {
    let h0 = code.ideal_hamiltonian(gap)?;
    if strength == 0.0 {
        return Ok(h0);
    }
    h0.plus_scaled(&perturbation_terms(code, kind, dressing, seed)?, strength)
}
