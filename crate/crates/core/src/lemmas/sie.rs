//! Incremental entangling: the instantaneous entropy rate under a
//! Hamiltonian acting across a cut.
//!
//! For a pure state and `L = ln rho_A ⊗ 1_B`, the rate
//! `Gamma = i Tr(H [rho, L])` reduces to `-2 Im <L psi | H psi>`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SiteSet;
use crate::linalg::{apply_gate_vector, hermitian_eigen, unitary_exp};
use crate::operators::random::{random_hermitian_unit, random_state};
use crate::operators::{hermitian_norm, reduced_density, DenseOperator, StateVector};
use crate::probes::{entanglement_entropy, EIGEN_FLOOR};
use crate::seeding::stream_rng;
use crate::C64;

/// Proven constant of the incremental-entangling inequality.
pub const SIE_CONSTANT: f64 = 18.0;

/// Step of the centred finite difference.
pub const FD_STEP: f64 = 1e-5;

/// Allowed disagreement `rel |Gamma| + abs` between the analytic rate and the
/// finite difference.
pub const FD_REL_TOL: f64 = 1e-4;
pub const FD_ABS_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieRate {
    /// Entropy rate in nats per unit time.
    pub gamma: f64,
    /// Some eigenvalue of `rho_A` was at or below the floor and regularized.
    pub floor_hit: bool,
}

/// `dS_A/dt` in nats at `t = 0` for `psi` evolving under `h_eff`.
pub fn sie_rate(h_eff: &DenseOperator, psi: &StateVector, a: &SiteSet) -> Result<SieRate> {
    let n = psi.num_sites();
    if h_eff.support().max_site().is_some_and(|s| s >= n) {
        return Err(Error::domain("generator acts outside the register"));
    }
    let rho_a = reduced_density(psi.amplitudes(), n, a)?;
    let (values, vectors) = hermitian_eigen(rho_a.as_ref())?;
    let floor_hit = values.iter().any(|&p| p <= EIGEN_FLOOR);
    let logs: Vec<f64> = values.iter().map(|&p| p.max(EIGEN_FLOOR).ln()).collect();
    let k = vectors.nrows();
    let scaled = faer::Mat::from_fn(k, k, |i, j| vectors[(i, j)] * logs[j]);
    let log_rho = &scaled * vectors.adjoint();
    let mut l_psi = psi.amplitudes().to_vec();
    apply_gate_vector(&mut l_psi, log_rho.as_ref(), a.as_slice());
    let mut h_psi = vec![C64::new(0.0, 0.0); psi.dim()];
    h_eff.apply_to(psi.amplitudes(), &mut h_psi);
    let overlap: C64 = l_psi.iter().zip(&h_psi).map(|(x, y)| x.conj() * y).sum();
    Ok(SieRate { gamma: -2.0 * overlap.im, floor_hit })
}

/// Centred finite difference of `S_A` in nats with step `h`.
pub fn sie_finite_difference(h_eff: &DenseOperator, psi: &StateVector, a: &SiteSet, h: f64) -> Result<f64> {
    let entropy_at = |tau: f64| -> Result<f64> {
        let u = unitary_exp(h_eff.matrix(), tau)?;
        let mut v = psi.amplitudes().to_vec();
        apply_gate_vector(&mut v, u.as_ref(), h_eff.support().as_slice());
        Ok(entanglement_entropy(&StateVector::normalized(v)?, a)? * std::f64::consts::LN_2)
    };
    Ok((entropy_at(h)? - entropy_at(-h)?) / (2.0 * h))
}

/// Outcome of [`sie_check`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieReport {
    pub trials: usize,
    /// Trials with `|Gamma| > 18 ln2 ‖H‖ min(a, b)`.
    pub violations: usize,
    /// Largest `|Gamma| / (ln2 ‖H‖ min(a, b))`, to compare with 18.
    pub empirical_max: f64,
    pub fd_failures: usize,
    /// Largest `|Gamma - FD| / max(|Gamma|, FD_ABS_TOL / FD_REL_TOL)`.
    pub max_fd_error: f64,
    pub floor_hits: usize,
}

/// Random trials: `H_eff` of unit norm on `a` qubits left and `a` right of
/// the cut (`a` alternating between 1 and 2), one spectator ancilla on each
/// side, and a Haar-random global state.
pub fn sie_check(trials: usize, seed: u64) -> Result<SieReport> {
    let mut report = SieReport {
        trials,
        violations: 0,
        empirical_max: 0.0,
        fd_failures: 0,
        max_fd_error: 0.0,
        floor_hits: 0,
    };
    for k in 0..trials {
        let mut rng = stream_rng(seed, k as u64);
        let a = 1 + k % 2;
        // qubits: [0, a) interact on side A, a is the A ancilla,
        // [a + 1, 2a + 1) interact on side B, 2a + 1 is the B ancilla
        let n = 2 * a + 2;
        let side_a = SiteSet::range(0, a + 1);
        let acting = SiteSet::range(0, a).union(&SiteSet::range(a + 1, 2 * a + 1));
        let h = DenseOperator::new(random_hermitian_unit(1 << (2 * a), &mut rng), acting)?;
        let psi = StateVector::normalized(random_state(1 << n, &mut rng))?;
        let rate = sie_rate(&h, &psi, &side_a)?;
        let scale = std::f64::consts::LN_2 * hermitian_norm(h.matrix())? * a as f64;
        let ratio = rate.gamma.abs() / scale;
        report.empirical_max = report.empirical_max.max(ratio);
        if ratio > SIE_CONSTANT {
            report.violations += 1;
        }
        report.floor_hits += usize::from(rate.floor_hit);
        let fd = sie_finite_difference(&h, &psi, &side_a, FD_STEP)?;
        let err = (rate.gamma - fd).abs();
        if err > FD_REL_TOL * rate.gamma.abs() + FD_ABS_TOL {
            report.fd_failures += 1;
        }
        report.max_fd_error = report.max_fd_error.max(err / rate.gamma.abs().max(FD_ABS_TOL / FD_REL_TOL));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_generator_does_not_entangle() {
        let mut rng = stream_rng(4, 0);
        let psi = StateVector::normalized(random_state(16, &mut rng)).unwrap();
        let a = SiteSet::range(0, 2);
        let h = DenseOperator::new(random_hermitian_unit(4, &mut rng), a.clone()).unwrap();
        assert!(sie_rate(&h, &psi, &a).unwrap().gamma.abs() < 1e-12);
    }

    #[test]
    fn rate_is_odd_in_the_generator_and_matches_finite_difference() {
        let mut rng = stream_rng(5, 0);
        let psi = StateVector::normalized(random_state(16, &mut rng)).unwrap();
        let a = SiteSet::range(0, 2);
        let h = DenseOperator::new(random_hermitian_unit(4, &mut rng), SiteSet::new([1, 2])).unwrap();
        let g = sie_rate(&h, &psi, &a).unwrap().gamma;
        let minus = sie_rate(&h.scale(C64::new(-1.0, 0.0)), &psi, &a).unwrap().gamma;
        assert!((g + minus).abs() < 1e-12);
        let fd = sie_finite_difference(&h, &psi, &a, FD_STEP).unwrap();
        assert!((g - fd).abs() <= FD_REL_TOL * g.abs() + FD_ABS_TOL);
    }
}
