use faer::Mat;

use super::DenseOperator;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, SiteSet};
use crate::linalg::scatter_table;
use crate::C64;

/// Traces the sites of `remove` out of `op`, optionally dividing by the
/// dimension of the traced factor. Sites of `remove` outside the support are
/// ignored.
pub fn trace_out(op: &DenseOperator, remove: &SiteSet, normalized: bool) -> DenseOperator {
    let support = op.support();
    let traced = support.intersection(remove);
    if traced.is_empty() {
        return op.clone();
    }
    let kept = support.difference(&traced);
    let kept_pos = kept.positions_in(support).expect("kept sites lie in the support");
    let traced_pos = traced.positions_in(support).expect("traced sites lie in the support");
    let kept_table = scatter_table(&kept_pos);
    let traced_table = scatter_table(&traced_pos);
    let scale = if normalized { 1.0 / traced_table.len() as f64 } else { 1.0 };
    let m = op.matrix();
    let out = Mat::<C64>::from_fn(kept_table.len(), kept_table.len(), |i, j| {
        let (ri, cj) = (kept_table[i], kept_table[j]);
        traced_table.iter().map(|&e| m[(ri | e, cj | e)]).sum::<C64>() * scale
    });
    DenseOperator::new(out, kept).expect("partial trace preserves finiteness")
}

/// `Tr_{support \ keep} rho`.
pub fn partial_trace(rho: &DenseOperator, keep: &SiteSet) -> Result<DenseOperator> {
    if keep.is_empty() {
        return Err(Error::domain("partial trace needs a non-empty set of kept sites"));
    }
    if !keep.is_subset(rho.support()) {
        return Err(Error::domain("kept sites are not a subset of the operator support"));
    }
    Ok(trace_out(rho, &rho.support().difference(keep), false))
}

/// Localizes `m` to `ball(center, r)`: every site farther than `r` from the
/// center is replaced by the normalized partial trace, which equals the Haar
/// average over unitaries acting on those sites.
pub fn truncate_to_ball(m: &DenseOperator, lattice: &Lattice, center: &SiteSet, r: usize) -> DenseOperator {
    let ball = lattice.ball(center, r);
    let outside = m.support().difference(&ball);
    trace_out(m, &outside, true)
}

/// Reduced density matrix on `keep` of a pure state over `num_sites` qubits.
pub fn reduced_density(psi: &[C64], num_sites: usize, keep: &SiteSet) -> Result<Mat<C64>> {
    if psi.len() != 1 << num_sites {
        return Err(Error::DimensionMismatch { expected: 1 << num_sites, found: psi.len() });
    }
    if keep.max_site().is_some_and(|m| m >= num_sites) {
        return Err(Error::domain("kept site outside the register"));
    }
    let rest = SiteSet::range(0, num_sites).difference(keep);
    let a_table = scatter_table(keep.as_slice());
    let b_table = scatter_table(rest.as_slice());
    let amp = Mat::<C64>::from_fn(a_table.len(), b_table.len(), |a, b| psi[a_table[a] | b_table[b]]);
    Ok(&amp * amp.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::operators::random::{random_hermitian, random_state};
    use crate::operators::{norm, Pauli, PauliString};
    use crate::seeding::stream_rng;

    fn outer(psi: &[C64]) -> Mat<C64> {
        Mat::from_fn(psi.len(), psi.len(), |i, j| psi[i] * psi[j].conj())
    }

    #[test]
    fn bell_state_reduces_to_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)];
        let rho = DenseOperator::new(outer(&psi), SiteSet::range(0, 2)).unwrap();
        let red = partial_trace(&rho, &SiteSet::singleton(0)).unwrap();
        let half = DenseOperator::identity(SiteSet::singleton(0)).scale(C64::new(0.5, 0.0));
        assert!(red.max_abs_diff(&half).unwrap() < 1e-15);
    }

    #[test]
    fn random_state_matches_index_contraction() {
        let mut rng = stream_rng(21, 0);
        let psi = random_state(8, &mut rng);
        let rho = DenseOperator::new(outer(&psi), SiteSet::range(0, 3)).unwrap();
        let red = partial_trace(&rho, &SiteSet::new([0, 1])).unwrap();
        // oracle: rho_{(a,c),(b,c)} summed over the high qubit c
        for a in 0..4 {
            for b in 0..4 {
                let mut want = C64::new(0.0, 0.0);
                for c in 0..2 {
                    want += psi[a + 4 * c] * psi[b + 4 * c].conj();
                }
                assert!((red.matrix()[(a, b)] - want).norm() < 1e-14);
            }
        }
        let direct = reduced_density(&psi, 3, &SiteSet::new([0, 1])).unwrap();
        assert!(linalg::max_abs_entry((&direct - red.matrix()).as_ref()) < 1e-14);
    }

    #[test]
    fn truncation_cases() {
        let lattice = Lattice::chain(6);
        let center = SiteSet::singleton(2);
        let inside = PauliString::from_ops([(1, Pauli::X), (3, Pauli::Z)]).local_matrix();
        assert!(truncate_to_ball(&inside, &lattice, &center, 1).max_abs_diff(&inside).unwrap() < 1e-15);
        let far = PauliString::single(5, Pauli::Z).local_matrix();
        let cut = truncate_to_ball(&far, &lattice, &center, 1);
        assert!(linalg::max_abs_entry(cut.matrix()) < 1e-15);
    }

    #[test]
    fn truncation_is_idempotent_and_contractive() {
        let lattice = Lattice::chain(4);
        let mut rng = stream_rng(22, 0);
        let m = DenseOperator::new(random_hermitian(16, &mut rng), SiteSet::range(0, 4)).unwrap();
        let center = SiteSet::singleton(0);
        let once = truncate_to_ball(&m, &lattice, &center, 1);
        let twice = truncate_to_ball(&once, &lattice, &center, 1);
        assert!(once.max_abs_diff(&twice).unwrap() < 1e-14);
        assert!(norm::spectral_norm(once.matrix()).unwrap() <= norm::spectral_norm(m.matrix()).unwrap() + 1e-12);
    }

    #[test]
    fn not_a_subset_is_an_error() {
        let rho = DenseOperator::identity(SiteSet::range(0, 2));
        assert!(partial_trace(&rho, &SiteSet::singleton(4)).is_err());
    }
}
