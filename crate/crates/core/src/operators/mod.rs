//! Operator and state algebra on qubit lattices.

mod dense;
mod norm;
mod pauli;
pub mod random;
mod state;
mod trace;

pub use dense::DenseOperator;
pub use norm::{
    commutator_norm, hermitian_norm, pauli_commutator_norm, spectral_norm, spectral_norm_power, NormBracket,
    SVD_DIM_LIMIT,
};
pub use pauli::{Pauli, PauliString};
pub use state::StateVector;
pub use trace::{partial_trace, reduced_density, trace_out, truncate_to_ball};
