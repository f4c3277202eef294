//! Analytical bounds: Lambert W, the logarithmic light cone, the l-bit light
//! cone, the entanglement-growth bound, and fits of their constants.

mod dominance;
mod fit;
mod lambert;
mod llc;
mod theorem1;

pub use dominance::{dominance_report, entropy_dominance, DominanceReport};
pub use fit::{fit_lbit_prefactor, fit_llc, fit_llc_cells, LlcFit};
pub use lambert::{lambert_w, residual as lambert_residual, Branch, BRANCH_POINT, MAX_HALLEY_STEPS};
pub use llc::{lbit_bound, llc_bound, LlcParams};
pub use theorem1::{
    fit_c1, theorem1_curve, theorem1_loosened, theorem1_rhs, BoundCurve, BoundDiagnostic, Theorem1Inputs,
    Theorem1Point,
};
