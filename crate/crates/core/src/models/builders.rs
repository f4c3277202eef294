use faer::Mat;
use rand::Rng;

use super::lbit::build_lbit;
use super::spec::ModelSpec;
use super::terms::{HamiltonianTerms, LocalTerm};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, SiteSet};
use crate::operators::{DenseOperator, Pauli, PauliString};
use crate::seeding::rng_from_seed;
use crate::C64;

fn pauli_sum(support: &SiteSet, parts: &[(f64, &[(usize, Pauli)])]) -> Result<DenseOperator> {
    let d = 1usize << support.len();
    let mut m = Mat::<C64>::zeros(d, d);
    for &(c, ops) in parts {
        if c == 0.0 {
            continue;
        }
        let p = PauliString::from_ops(ops.iter().copied()).matrix_on(support)?;
        m += p.into_matrix() * faer::Scale(C64::new(c, 0.0));
    }
    DenseOperator::new(m, support.clone())
}

/// Nearest-neighbour spin-1/2 chain with XXZ bonds and random `Z` fields.
fn xxz_terms(lattice: &Lattice, j: f64, jz: f64, disorder: f64, seed: u64) -> Result<Vec<LocalTerm>> {
    let mut rng = rng_from_seed(seed);
    let fields: Vec<f64> =
        (0..lattice.num_sites()).map(|_| disorder * (2.0 * rng.random::<f64>() - 1.0)).collect();
    let mut terms = Vec::new();
    for (a, b) in lattice.bonds() {
        let support = SiteSet::new([a, b]);
        let op = pauli_sum(
            &support,
            &[
                (j / 4.0, &[(a, Pauli::X), (b, Pauli::X)]),
                (j / 4.0, &[(a, Pauli::Y), (b, Pauli::Y)]),
                (jz / 4.0, &[(a, Pauli::Z), (b, Pauli::Z)]),
            ],
        )?;
        terms.push(LocalTerm::on_support(op));
    }
    if disorder > 0.0 {
        for (i, h) in fields.into_iter().enumerate() {
            let op = pauli_sum(&SiteSet::singleton(i), &[(h / 2.0, &[(i, Pauli::Z)])])?;
            terms.push(LocalTerm::on_support(op));
        }
    }
    Ok(terms)
}

fn ising_terms(lattice: &Lattice, j: f64, hx: f64, hz: f64) -> Result<Vec<LocalTerm>> {
    let mut terms = Vec::new();
    for (a, b) in lattice.bonds() {
        let op = pauli_sum(&SiteSet::new([a, b]), &[(j, &[(a, Pauli::Z), (b, Pauli::Z)])])?;
        terms.push(LocalTerm::on_support(op));
    }
    for i in 0..lattice.num_sites() {
        let op = pauli_sum(&SiteSet::singleton(i), &[(hx, &[(i, Pauli::X)]), (hz, &[(i, Pauli::Z)])])?;
        terms.push(LocalTerm::on_support(op));
    }
    Ok(terms)
}

/// Realizes `spec` on `lattice`. Deterministic in `(spec, seed)`.
pub fn build_hamiltonian(spec: &ModelSpec, lattice: &Lattice, seed: u64) -> Result<HamiltonianTerms> {
    spec.validate()?;
    let n = lattice.num_sites();
    crate::check_dense_size(n)?;
    let terms = match spec {
        ModelSpec::DisorderedXxz { j, jz, disorder } => xxz_terms(lattice, *j, *jz, *disorder, seed)?,
        ModelSpec::AndersonXx { j, disorder } => xxz_terms(lattice, *j, 0.0, *disorder, seed)?,
        ModelSpec::ErgodicIsing { j, hx, hz } => ising_terms(lattice, *j, *hx, *hz)?,
        ModelSpec::Lbit(lbit) => return Ok(build_lbit(lbit, lattice, seed)?.terms),
        ModelSpec::StabilizerPerturbed { code, gap, strength, perturbation, dressing } => {
            let code = crate::memory::build_code(code)?;
            if code.num_qubits() != n {
                return Err(Error::Config(format!(
                    "code has {} qubits but the lattice has {n} sites",
                    code.num_qubits()
                )));
            }
            return crate::memory::perturbed_hamiltonian(&code, *gap, *strength, *perturbation, dressing, seed);
        }
    };
    HamiltonianTerms::new(n, terms)
}
