//! Out-of-time-order correlators `F = tr(rho W†(t) V† W(t) V)` and
//! `C = 1 - Re F`.

use faer::Mat;

use super::lightcone::{probe_site, GridMeta, LightConeGrid};
use crate::error::{Error, Result};
use crate::evolve::{EigenOperator, Propagator};
use crate::lattice::{Lattice, SiteSet};
use crate::models::gibbs_from_spectrum;
use crate::operators::{Pauli, PauliString};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Otoc {
    pub f: C64,
    pub c: f64,
}

impl Otoc {
    fn from_f(f: C64) -> Self {
        Otoc { f, c: 1.0 - f.re }
    }
}

/// Thermal state in the computational basis, `None` at infinite temperature.
fn thermal(prop: &Propagator, beta: f64) -> Result<Option<Mat<C64>>> {
    if beta == 0.0 {
        return Ok(None);
    }
    gibbs_from_spectrum(prop.energies(), &prop.vectors().to_owned(), beta).map(Some)
}

/// `F` for `A = W(t)` and `V` in signed-permutation form.
fn contract(a: &Mat<C64>, flip: usize, vals: &[C64], rho: Option<&Mat<C64>>) -> C64 {
    let d = a.nrows();
    // X = V† A V, entry (k, l) = conj(v_k) A[k^f, l^f] v_l
    let x = |k: usize, l: usize| vals[k].conj() * a[(k ^ flip, l ^ flip)] * vals[l];
    match rho {
        None => {
            let mut sum = C64::new(0.0, 0.0);
            for l in 0..d {
                for k in 0..d {
                    sum += a[(k, l)].conj() * x(k, l);
                }
            }
            sum / d as f64
        }
        Some(rho) => {
            let xm = Mat::from_fn(d, d, x);
            let b = a.adjoint() * &xm;
            let mut sum = C64::new(0.0, 0.0);
            for j in 0..d {
                for i in 0..d {
                    sum += rho[(i, j)] * b[(j, i)];
                }
            }
            sum
        }
    }
}

fn validate_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("inverse temperature must be finite and non-negative, got {beta}")))
    }
}

/// OTOC of two Pauli strings at inverse temperature `beta` and time `t`.
pub fn otoc(prop: &Propagator, beta: f64, w: &PauliString, v: &PauliString, t: f64) -> Result<Otoc> {
    validate_beta(beta)?;
    let all = SiteSet::range(0, prop.num_sites());
    let rho = thermal(prop, beta)?;
    let a = prop.to_eigenbasis(&w.matrix_on(&all)?)?.at_time(prop, t);
    let (flip, vals) = v.permutation_form(&all)?;
    Ok(Otoc::from_f(contract(&a, flip, &vals, rho.as_ref())))
}

/// `C(r, t)` on a grid for single-site Paulis `W` at `origin` and `V` at
/// distance `r`.
#[allow(clippy::too_many_arguments)]
pub fn otoc_grid(
    prop: &Propagator,
    lattice: &Lattice,
    beta: f64,
    origin: usize,
    w_kind: Pauli,
    v_kind: Pauli,
    times: &[f64],
    distances: &[usize],
) -> Result<LightConeGrid> {
    validate_beta(beta)?;
    let all = SiteSet::range(0, prop.num_sites());
    let rho = thermal(prop, beta)?;
    let w: EigenOperator = prop.to_eigenbasis(&PauliString::single(origin, w_kind).matrix_on(&all)?)?;
    let forms = distances
        .iter()
        .map(|&r| PauliString::single(probe_site(lattice, origin, r)?, v_kind).permutation_form(&all))
        .collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(times.len());
    for &t in times {
        let a = w.at_time(prop, t);
        values.push(forms.iter().map(|(flip, vals)| Otoc::from_f(contract(&a, *flip, vals, rho.as_ref())).c).collect());
    }
    let meta = GridMeta { probes: format!("{w_kind}{origin} | {v_kind}@r, beta={beta}"), ..GridMeta::default() };
    LightConeGrid::new(times.to_vec(), distances.to_vec(), values, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_hamiltonian, ModelSpec};

    fn prop(l: usize) -> Propagator {
        let spec = ModelSpec::DisorderedXxz { j: 1.0, jz: 0.7, disorder: 1.0 };
        Propagator::new(&build_hamiltonian(&spec, &Lattice::chain(l), 5).unwrap()).unwrap()
    }

    #[test]
    fn initial_values() {
        let p = prop(3);
        let x0 = PauliString::single(0, Pauli::X);
        let z0 = PauliString::single(0, Pauli::Z);
        let z2 = PauliString::single(2, Pauli::Z);
        let far = otoc(&p, 0.0, &x0, &z2, 0.0).unwrap();
        assert!((far.f - C64::new(1.0, 0.0)).norm() < 1e-12);
        let same = otoc(&p, 0.0, &x0, &z0, 0.0).unwrap();
        assert!((same.f + C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((same.c - 2.0).abs() < 1e-12);
    }

    #[test]
    fn infinite_temperature_otoc_is_real() {
        let p = prop(4);
        let w = PauliString::single(0, Pauli::Z);
        let v = PauliString::single(2, Pauli::X);
        let o = otoc(&p, 0.0, &w, &v, 3.0).unwrap();
        assert!(o.f.im.abs() < 1e-10);
    }

    #[test]
    fn grid_matches_pointwise_path() {
        let p = prop(4);
        let l = Lattice::chain(4);
        let g = otoc_grid(&p, &l, 0.5, 0, Pauli::Z, Pauli::Z, &[0.5, 2.0], &[1, 3]).unwrap();
        let direct = otoc(&p, 0.5, &PauliString::single(0, Pauli::Z), &PauliString::single(3, Pauli::Z), 2.0).unwrap();
        assert!((g.value(1, 1) - direct.c).abs() < 1e-12);
    }
}
