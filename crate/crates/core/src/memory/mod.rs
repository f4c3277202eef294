//! Stabilizer-code memories under perturbed evolution.
//!
//! Information stored in a code is protected while every local probe,
//! compressed to the code space, stays close to a multiple of the code
//! projector. The scans here measure how long that lasts when the ideal
//! stabilizer Hamiltonian is perturbed by localized or by ergodic terms.

mod accuracy;
mod code;
mod scan;

pub use accuracy::{
    compress_dense, compress_pauli, evolved_basis, general_deviation, hermitian_deviation, to_accuracy, Accuracy,
    NonHermitianPolicy,
};
pub use code::{build_code, perturbation_terms, perturbed_hamiltonian, CodeKind, PerturbationKind, StabilizerCode};
pub use scan::{
    compare_variants, lifetime_scan, median, select_probes, Probe, QuenchSpec, ScanResult, ScanRow,
    VariantComparison,
};
