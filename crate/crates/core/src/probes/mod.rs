//! Measured quantities: commutator light cones, OTOCs, entanglement traces,
//! contours and front-shape fits.

mod contour;
mod entropy;
mod front;
mod lightcone;
mod otoc;

pub use contour::{contour_extract, Contour};
pub use entropy::{entanglement_entropy, entropy_trace, entropy_trace_with, von_neumann_bits, EntropyTrace, EIGEN_FLOOR};
pub use front::{aic, front_fit, growth_fit, BroadenedFit, FrontFit, FrontModel, GrowthFit, ModelFit, MIN_FRONT_POINTS};
pub use lightcone::{commutator_grid, commutator_grid_with, GridMeta, LightConeGrid};
pub use otoc::{otoc, otoc_grid, Otoc};

/// Grid values below this are solver noise and count as zero in fits.
pub const NOISE_FLOOR: f64 = 1e-12;
