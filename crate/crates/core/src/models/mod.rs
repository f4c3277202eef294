//! Hamiltonian builders.

mod builders;
mod export;
mod gibbs;
mod lbit;
mod spec;
mod terms;

pub use builders::build_hamiltonian;
pub use export::{ExportedModel, ExportedTerm};
pub use gibbs::{build_gibbs, gibbs_from_spectrum};
pub use lbit::{build_lbit, quasi_locality_profile, DressingGate, LbitRealization, LbitSpec, ProfileRow, COMMUTATION_TOL};
pub use spec::ModelSpec;
pub use terms::{HamiltonianTerms, LocalTerm, HERMITIAN_TOL};
