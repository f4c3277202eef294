//! Level-set extraction `r_theta(t)` from a light-cone grid.

use serde::{Deserialize, Serialize};

use super::lightcone::LightConeGrid;
use super::NOISE_FLOOR;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub theta: f64,
    /// `(t, r_theta)` for the times where the grid reaches `theta`.
    pub rows: Vec<(f64, f64)>,
    /// Times without any crossing.
    pub omitted: usize,
}

/// For each time, the outermost distance where the grid value is at least
/// `theta`, refined by interpolating `ln value` linearly in `r` towards the
/// next sample. A level above every grid value gives an empty table.
pub fn contour_extract(grid: &LightConeGrid, theta: f64) -> Result<Contour> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::domain(format!("contour level must be positive, got {theta}")));
    }
    let mut order: Vec<usize> = (0..grid.distances.len()).collect();
    order.sort_by_key(|&k| grid.distances[k]);
    let clean = |v: f64| if v < NOISE_FLOOR { 0.0 } else { v };
    let mut rows = Vec::new();
    let mut omitted = 0;
    for (ti, &t) in grid.times.iter().enumerate() {
        let vals: Vec<(f64, f64)> =
            order.iter().map(|&k| (grid.distances[k] as f64, clean(grid.values[ti][k]))).collect();
        let Some(i) = vals.iter().rposition(|&(_, v)| v >= theta) else {
            omitted += 1;
            continue;
        };
        let (r0, v0) = vals[i];
        let r = match vals.get(i + 1) {
            None => r0,
            Some(&(r1, v1)) if v1 > 0.0 => r0 + (r1 - r0) * (v0 / theta).ln() / (v0 / v1).ln(),
            Some(&(r1, v1)) => r0 + (r1 - r0) * (v0 - theta) / (v0 - v1),
        };
        rows.push((t, r));
    }
    Ok(Contour { theta, rows, omitted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probes::GridMeta;

    fn synthetic(f: impl Fn(f64, f64) -> f64) -> LightConeGrid {
        let times: Vec<f64> = (1..=6).map(|k| k as f64).collect();
        let distances: Vec<usize> = (0..=12).collect();
        let values = times.iter().map(|&t| distances.iter().map(|&r| f(r as f64, t)).collect()).collect();
        LightConeGrid::new(times, distances, values, GridMeta::default()).unwrap()
    }

    #[test]
    fn zero_grid_gives_empty_table() {
        let c = contour_extract(&synthetic(|_, _| 0.0), 0.1).unwrap();
        assert!(c.rows.is_empty());
        assert_eq!(c.omitted, 6);
    }

    #[test]
    fn travelling_exponential_front() {
        let c = contour_extract(&synthetic(|r, t| (-(r - t)).exp()), 1.0).unwrap();
        for (t, r) in c.rows {
            assert!((r - t).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_positive_level() {
        assert!(contour_extract(&synthetic(|_, _| 1.0), 0.0).is_err());
    }
}
