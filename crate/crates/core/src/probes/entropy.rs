//! Entanglement entropy across a cut, in bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{krylov_evolve, Engine, Propagator};
use crate::lattice::SiteSet;
use crate::linalg;
use crate::models::HamiltonianTerms;
use crate::operators::{reduced_density, StateVector};

/// Eigenvalues of `rho_A` at or below this are dropped from `-sum p log p`.
pub const EIGEN_FLOOR: f64 = 1e-14;

/// `-sum_k p_k log2 p_k` over the eigenvalues above [`EIGEN_FLOOR`].
pub fn von_neumann_bits(spectrum: &[f64]) -> f64 {
    let s: f64 = spectrum.iter().filter(|&&p| p > EIGEN_FLOOR).map(|&p| -p * p.log2()).sum();
    s.max(0.0)
}

fn check_cut(a: &SiteSet, num_sites: usize) -> Result<()> {
    if a.is_empty() || a.len() >= num_sites || a.max_site().is_some_and(|m| m >= num_sites) {
        return Err(Error::domain(format!("cut {a:?} must be a non-empty proper subset of {num_sites} sites")));
    }
    Ok(())
}

/// Von Neumann entropy of `Tr_B |psi><psi|` in bits, with `B` the complement
/// of `a`. The smaller side is traced into, which gives the same spectrum.
pub fn entanglement_entropy(psi: &StateVector, a: &SiteSet) -> Result<f64> {
    let n = psi.num_sites();
    check_cut(a, n)?;
    let b = SiteSet::range(0, n).difference(a);
    let keep = if a.len() <= b.len() { a } else { &b };
    let rho = reduced_density(psi.amplitudes(), n, keep)?;
    Ok(von_neumann_bits(&linalg::hermitian_eigenvalues(rho.as_ref())?))
}

/// `S(t)` along a quench.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyTrace {
    pub times: Vec<f64>,
    pub s_bits: Vec<f64>,
    /// `S(t) - S(0)` where `S(0)` is the entropy of the initial state.
    pub delta_bits: Vec<f64>,
    pub cut: SiteSet,
    /// Number of terms acting on both sides of the cut.
    pub boundary_size: usize,
}

/// Entropy of `U(t) psi0` across `a` at each time.
///
/// The exact engine diagonalizes `h` once; the Krylov engine propagates from
/// one time to the next and needs `times` sorted.
pub fn entropy_trace(
    h: &HamiltonianTerms,
    psi0: &StateVector,
    times: &[f64],
    a: &SiteSet,
    engine: Engine,
    krylov_dim: usize,
) -> Result<EntropyTrace> {
    check_cut(a, h.num_sites())?;
    if psi0.num_sites() != h.num_sites() {
        return Err(Error::DimensionMismatch { expected: h.num_sites(), found: psi0.num_sites() });
    }
    let s0 = entanglement_entropy(psi0, a)?;
    let mut s_bits = Vec::with_capacity(times.len());
    match engine {
        Engine::Exact => return entropy_trace_with(&Propagator::new(h)?, h, psi0, times, a),
        Engine::Krylov => {
            if times.windows(2).any(|w| w[1] < w[0]) || times.first().is_some_and(|&t| t < 0.0) {
                return Err(Error::Config("krylov entropy traces need sorted non-negative times".into()));
            }
            let mut psi = psi0.clone();
            let mut now = 0.0;
            for &t in times {
                psi = krylov_evolve(h, &psi, t - now, krylov_dim)?;
                now = t;
                s_bits.push(entanglement_entropy(&psi, a)?);
            }
        }
    }
    let delta_bits = s_bits.iter().map(|s| s - s0).collect();
    let boundary_size = h.crossing_terms(a)?.len();
    Ok(EntropyTrace { times: times.to_vec(), s_bits, delta_bits, cut: a.clone(), boundary_size })
}

/// Exact [`entropy_trace`] with a precomputed propagator of `h`.
pub fn entropy_trace_with(
    prop: &Propagator,
    h: &HamiltonianTerms,
    psi0: &StateVector,
    times: &[f64],
    a: &SiteSet,
) -> Result<EntropyTrace> {
    check_cut(a, h.num_sites())?;
    if psi0.num_sites() != prop.num_sites() || h.num_sites() != prop.num_sites() {
        return Err(Error::DimensionMismatch { expected: prop.num_sites(), found: psi0.num_sites() });
    }
    let s0 = entanglement_entropy(psi0, a)?;
    let s_bits =
        times.iter().map(|&t| entanglement_entropy(&prop.evolve_state(psi0, t)?, a)).collect::<Result<Vec<_>>>()?;
    let delta_bits = s_bits.iter().map(|s| s - s0).collect();
    let boundary_size = h.crossing_terms(a)?.len();
    Ok(EntropyTrace { times: times.to_vec(), s_bits, delta_bits, cut: a.clone(), boundary_size })
}
