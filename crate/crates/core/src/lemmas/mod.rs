//! Numerical checks of the entangling inequalities and of the propagator
//! decomposition at a cut.

mod cut;
mod decomposition;
mod sie;
mod ste;

pub use cut::CutSpec;
pub use decomposition::{boundary_decomposition, DecompositionPoint, DecompositionReport, DECOMPOSITION_TOL};
pub use sie::{sie_check, sie_finite_difference, sie_rate, SieRate, SieReport, FD_ABS_TOL, FD_REL_TOL, FD_STEP, SIE_CONSTANT};
pub use ste::{entangling_change, ste_check, SteReport, STE_MAX_QUBITS, STE_TOL};
