//! Commutator-norm light cones `‖[O_X(t), O_Y]‖` on a `(t, r)` grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::Propagator;
use crate::lattice::{Lattice, SiteSet};
use crate::models::HamiltonianTerms;
use crate::operators::{pauli_commutator_norm, DenseOperator, Pauli, PauliString};

/// Provenance of a grid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridMeta {
    /// Hex digest of the model configuration, empty when not tracked.
    pub spec_hash: String,
    pub seed: u64,
    /// Probe pair, e.g. `"Z0 | Z@r"`.
    pub probes: String,
}

/// Values on `times x distances`; `values[i][k]` belongs to `times[i]` and
/// `distances[k]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LightConeGrid {
    pub times: Vec<f64>,
    pub distances: Vec<usize>,
    pub values: Vec<Vec<f64>>,
    pub meta: GridMeta,
}

impl LightConeGrid {
    /// Checks the shape and that every value is finite.
    pub fn new(times: Vec<f64>, distances: Vec<usize>, values: Vec<Vec<f64>>, meta: GridMeta) -> Result<Self> {
        if values.len() != times.len() {
            return Err(Error::DimensionMismatch { expected: times.len(), found: values.len() });
        }
        for row in &values {
            if row.len() != distances.len() {
                return Err(Error::DimensionMismatch { expected: distances.len(), found: row.len() });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::numerical("non-finite light-cone value"));
            }
        }
        Ok(LightConeGrid { times, distances, values, meta })
    }

    pub fn value(&self, ti: usize, ri: usize) -> f64 {
        self.values[ti][ri]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().flatten().copied().fold(0.0, f64::max)
    }

    /// `(t, r, value)` in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (f64, usize, f64)> + '_ {
        self.times
            .iter()
            .zip(&self.values)
            .flat_map(move |(&t, row)| self.distances.iter().zip(row).map(move |(&r, &v)| (t, r, v)))
    }
}

/// Site at distance `r` from `origin`, or an error if the lattice is too small.
pub(crate) fn probe_site(lattice: &Lattice, origin: usize, r: usize) -> Result<usize> {
    lattice
        .site_at_distance(&SiteSet::singleton(origin), r)
        .ok_or_else(|| Error::domain(format!("no site at distance {r} from site {origin}")))
}

/// `‖[O_X(t), P_r]‖` with `O_X` the single-site Pauli `x_kind` at `origin` and
/// `P_r` the single-site Pauli `y_kind` at distance `r`.
pub fn commutator_grid(
    h: &HamiltonianTerms,
    lattice: &Lattice,
    origin: usize,
    x_kind: Pauli,
    y_kind: Pauli,
    times: &[f64],
    distances: &[usize],
) -> Result<LightConeGrid> {
    let prop = Propagator::new(h)?;
    commutator_grid_with(&prop, lattice, origin, x_kind, y_kind, times, distances)
}

/// [`commutator_grid`] with a precomputed propagator.
pub fn commutator_grid_with(
    prop: &Propagator,
    lattice: &Lattice,
    origin: usize,
    x_kind: Pauli,
    y_kind: Pauli,
    times: &[f64],
    distances: &[usize],
) -> Result<LightConeGrid> {
    if lattice.num_sites() != prop.num_sites() {
        return Err(Error::DimensionMismatch { expected: lattice.num_sites(), found: prop.num_sites() });
    }
    let sites = distances.iter().map(|&r| probe_site(lattice, origin, r)).collect::<Result<Vec<_>>>()?;
    let all = SiteSet::range(0, prop.num_sites());
    let o_x = PauliString::single(origin, x_kind).matrix_on(&all)?;
    let eig = prop.to_eigenbasis(&o_x)?;
    let mut values = Vec::with_capacity(times.len());
    for &t in times {
        let o_t = if t == 0.0 { o_x.clone() } else { DenseOperator::new(eig.at_time(prop, t), all.clone())? };
        let row = sites.iter().map(|&s| pauli_commutator_norm(&o_t, s, y_kind)).collect::<Result<Vec<_>>>()?;
        values.push(row);
    }
    let meta = GridMeta { probes: format!("{x_kind}{origin} | {y_kind}@r"), ..GridMeta::default() };
    LightConeGrid::new(times.to_vec(), distances.to_vec(), values, meta)
}
