//! Total entangling: a unitary on `a` qubits of `A` and `b` qubits of `B`
//! changes the entropy across the cut by at most `2 min(a, b)` bits.

use faer::MatRef;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SiteSet;
use crate::linalg::apply_gate_vector;
use crate::operators::random::{haar_unitary, random_state};
use crate::operators::StateVector;
use crate::probes::entanglement_entropy;
use crate::seeding::stream_rng;
use crate::C64;

/// Slack added to the bound before a trial counts as a violation.
pub const STE_TOL: f64 = 1e-9;

/// Largest register used by [`ste_check`].
pub const STE_MAX_QUBITS: usize = 12;

/// `S_A(U psi) - S_A(psi)` in bits, with `u` acting on `positions`.
pub fn entangling_change(psi: &StateVector, u: MatRef<'_, C64>, positions: &[usize], side_a: &SiteSet) -> Result<f64> {
    if u.nrows() != 1 << positions.len() || u.ncols() != u.nrows() {
        return Err(Error::DimensionMismatch { expected: 1 << positions.len(), found: u.nrows() });
    }
    let before = entanglement_entropy(psi, side_a)?;
    let mut v = psi.amplitudes().to_vec();
    apply_gate_vector(&mut v, u, positions);
    Ok(entanglement_entropy(&StateVector::normalized(v)?, side_a)? - before)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteReport {
    pub trials: usize,
    pub a: usize,
    pub b: usize,
    /// `2 min(a, b)`.
    pub bound_bits: f64,
    pub violations: usize,
    pub max_delta_bits: f64,
    /// Largest change among trials whose interacting qubits start maximally
    /// entangled with local ancillas.
    pub max_delta_ancilla_bits: f64,
    /// Largest change among trials with a Haar-random global state.
    pub max_delta_haar_bits: f64,
}

/// Haar-random unitaries on `a + b` qubits straddling the cut.
///
/// Each side carries as many ancillas as interacting qubits. Even trials
/// start from a Haar-random state of the whole register; odd trials pair
/// every interacting qubit with its ancilla in a Bell state, which is where
/// the bound is nearly reached.
pub fn ste_check(trials: usize, a: usize, b: usize, seed: u64) -> Result<SteReport> {
    if a == 0 || b == 0 {
        return Err(Error::domain("both sides need at least one interacting qubit"));
    }
    let n = 2 * (a + b);
    if n > STE_MAX_QUBITS {
        return Err(Error::Oversize(format!("{n} qubits exceed the limit of {STE_MAX_QUBITS}")));
    }
    // [0, a) acting on A, [a, 2a) A ancillas, [2a, 2a + b) acting on B, rest B ancillas
    let side_a = SiteSet::range(0, 2 * a);
    let positions: Vec<usize> = (0..a).chain(2 * a..2 * a + b).collect();
    let bound_bits = 2.0 * a.min(b) as f64;
    let mut report = SteReport {
        trials,
        a,
        b,
        bound_bits,
        violations: 0,
        max_delta_bits: f64::NEG_INFINITY,
        max_delta_ancilla_bits: f64::NEG_INFINITY,
        max_delta_haar_bits: f64::NEG_INFINITY,
    };
    for k in 0..trials {
        let mut rng = stream_rng(seed, k as u64);
        let u = haar_unitary(1 << (a + b), &mut rng);
        let psi = if k % 2 == 0 {
            StateVector::normalized(random_state(1 << n, &mut rng))?
        } else {
            let pairs: Vec<(usize, usize)> = (0..a).map(|i| (i, a + i)).chain((0..b).map(|j| (2 * a + j, 2 * a + b + j))).collect();
            bell_pairs(n, &pairs)
        };
        let delta = entangling_change(&psi, u.as_ref(), &positions, &side_a)?;
        if delta > bound_bits + STE_TOL {
            report.violations += 1;
        }
        report.max_delta_bits = report.max_delta_bits.max(delta);
        let family = if k % 2 == 0 { &mut report.max_delta_haar_bits } else { &mut report.max_delta_ancilla_bits };
        *family = family.max(delta);
    }
    Ok(report)
}

/// Product of Bell pairs `(|00> + |11>) / sqrt 2` on the given qubit pairs.
fn bell_pairs(n: usize, pairs: &[(usize, usize)]) -> StateVector {
    let amp = C64::new((0.5f64).powf(pairs.len() as f64 / 2.0), 0.0);
    let mut v = vec![C64::new(0.0, 0.0); 1 << n];
    for pattern in 0..1usize << pairs.len() {
        let index = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| pattern >> k & 1 == 1)
            .fold(0usize, |acc, (_, &(p, q))| acc | 1 << p | 1 << q);
        v[index] = amp;
    }
    StateVector::normalized(v).expect("bell pairs are normalized")
}

#[cfg(test)]
mod tests {
    use super::*;
    use faer::Mat;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn swap_on_product_state_does_not_entangle() {
        let swap = Mat::from_fn(4, 4, |i, j| c(if i == [0, 2, 1, 3][j] { 1.0 } else { 0.0 }));
        let psi = StateVector::basis(2, 0b01);
        let d = entangling_change(&psi, swap.as_ref(), &[0, 1], &SiteSet::singleton(0)).unwrap();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn bell_preparation_creates_one_bit() {
        // column 0 maps |00> to (|00> + |11>)/sqrt 2; the rest completes a unitary
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rows = [[s, 0.0, 0.0, s], [0.0, s, s, 0.0], [0.0, s, -s, 0.0], [s, 0.0, 0.0, -s]];
        let u = Mat::from_fn(4, 4, |i, j| c(rows[i][j]));
        let psi = StateVector::basis(2, 0);
        let d = entangling_change(&psi, u.as_ref(), &[0, 1], &SiteSet::singleton(0)).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_run_respects_the_bound() {
        let r = ste_check(20, 1, 1, 9).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.max_delta_bits <= 2.0 + STE_TOL);
        assert!(ste_check(1, 4, 3, 0).is_err());
    }
}
