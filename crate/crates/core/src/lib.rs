//! Numerical laboratory for logarithmic light cones.
//!
//! The crate builds small disordered spin-1/2 lattices, measures how fast
//! operators and entanglement spread in them, and compares the measurements
//! with analytical bounds:
//!
//! - [`lattice`]: sites, the graph metric, balls.
//! - [`operators`]: Pauli strings, dense operators on a support, partial
//!   traces, spectral norms and the ball truncation.
//! - [`models`]: disordered XXZ / Anderson chains, the ergodic Ising reference,
//!   the l-bit model with exactly commuting quasi-local integrals of motion,
//!   and perturbed stabilizer Hamiltonians.
//! - [`evolve`]: exact propagators and Krylov state propagation.
//! - [`probes`]: commutator light cones, OTOCs, entanglement traces, contours
//!   and front-shape fits.
//! - [`bounds`]: Lambert W, the logarithmic light-cone bound, the l-bit bound,
//!   the entanglement-growth bound and its fits.
//! - [`lemmas`]: numerical checks of the incremental and total entangling
//!   inequalities and of the boundary decomposition of the propagator.
//! - [`memory`]: stabilizer codes and the lifetime of encoded information
//!   under localized versus ergodic perturbations.
//! - [`harness`]: configuration files, ensembles, artifacts and manifests.
//!
//! Qubit `k` is bit `k` of a basis-state index throughout.

pub mod bounds;
pub mod error;
pub mod evolve;
pub mod harness;
pub mod lattice;
pub mod lemmas;
pub mod linalg;
pub mod memory;
pub mod models;
pub mod operators;
pub mod probes;
pub mod seeding;

pub use error::{Error, Result};
pub use lattice::{Boundary, Lattice, SiteSet};
pub use operators::{DenseOperator, Pauli, PauliString, StateVector};

/// Complex scalar used for every matrix and state.
pub type C64 = num_complex::Complex<f64>;

/// Largest number of sites for which full `2^N` matrices are materialized.
pub const MAX_DENSE_SITES: usize = 14;

pub(crate) fn check_dense_size(num_sites: usize) -> Result<()> {
    if num_sites > MAX_DENSE_SITES {
        Err(Error::Oversize(format!(
            "{num_sites} sites exceed the dense limit of {MAX_DENSE_SITES}"
        )))
    } else {
        Ok(())
    }
}
