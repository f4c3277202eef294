//! Splitting the propagator at a cut: `U(t) = U_∂(t) U_0(t)`.
//!
//! With `H = H_0 + H_∂`, `H_0 = H_A + H_B` and `U_0 = exp(-i H_0 t)`, the
//! factor `U_∂ = U U_0†` solves `i dU_∂/dt = H_∂(t) U_∂` with
//! `H_∂(t) = sum_{n in ∂} U(t) h_n U†(t)`. Truncating every `h_n(t)` to the
//! ball of radius `r` around its anchor gives a generator on the ribbon
//! around the cut; the residual `‖U(t) - U_∂(t, r) U_0(t)‖` is at most the
//! time integral of `‖H_∂(t') - H_∂(t', r)‖`.

use faer::Mat;
use serde::{Deserialize, Serialize};

use super::cut::CutSpec;
use crate::error::{Error, Result};
use crate::evolve::{EigenOperator, Propagator};
use crate::lattice::{Lattice, SiteSet};
use crate::linalg::unitary_exp;
use crate::models::HamiltonianTerms;
use crate::operators::{hermitian_norm, spectral_norm, trace_out, DenseOperator};
use crate::C64;

/// Local error allowed per integration step.
pub const DECOMPOSITION_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionPoint {
    pub r: usize,
    /// `‖U(t) - U_∂(t, r) U_0(t)‖`.
    pub residual: f64,
    /// `int_0^t ‖H_∂(t') - H_∂(t', r)‖ dt'` by two-point Gauss quadrature on
    /// the integration steps.
    pub integral_bound: f64,
    /// Sites within `r` of some boundary-term anchor.
    pub ribbon_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub t: f64,
    pub boundary_terms: usize,
    pub points: Vec<DecompositionPoint>,
    pub steps: usize,
    pub rejected_steps: usize,
}

struct Generators<'a> {
    prop: &'a Propagator,
    all: SiteSet,
    /// Each boundary term in the eigenbasis, with the sites outside each ball.
    terms: Vec<(EigenOperator, Vec<SiteSet>)>,
}

impl Generators<'_> {
    /// `H_∂(t')` and its truncations, one per radius.
    fn at(&self, t: f64) -> Result<(Mat<C64>, Vec<Mat<C64>>)> {
        let d = self.prop.dim();
        let radii = self.terms.first().map_or(0, |t| t.1.len());
        let mut full = Mat::<C64>::zeros(d, d);
        let mut cut = vec![Mat::<C64>::zeros(d, d); radii];
        let one = C64::new(1.0, 0.0);
        for (eig, outside) in &self.terms {
            // U h U† is the Heisenberg evolution backwards in time
            let op = DenseOperator::new(eig.at_time(self.prop, -t), self.all.clone())?;
            full += op.matrix();
            for (acc, out) in cut.iter_mut().zip(outside) {
                trace_out(&op, out, true).accumulate_into(acc, &self.all, one)?;
            }
        }
        Ok((full, cut))
    }
}

/// Fourth-order Magnus step from the generators at the two Gauss points.
fn magnus(g1: &Mat<C64>, g2: &Mat<C64>, tau: f64) -> Result<Mat<C64>> {
    let comm = g2 * g1 - g1 * g2;
    let c = C64::new(0.0, -3f64.sqrt() / 12.0 * tau * tau);
    let k = Mat::from_fn(g1.nrows(), g1.ncols(), |i, j| (g1[(i, j)] + g2[(i, j)]) * (0.5 * tau) + comm[(i, j)] * c);
    unitary_exp(k.as_ref(), 1.0)
}

fn frobenius(m: &Mat<C64>) -> f64 {
    m.norm_l2()
}

/// Residuals of the truncated decomposition at time `t` for each radius.
pub fn boundary_decomposition(
    h: &HamiltonianTerms,
    lattice: &Lattice,
    cut: &CutSpec,
    radii: &[usize],
    t: f64,
) -> Result<DecompositionReport> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(format!("decomposition time must be non-negative, got {t}")));
    }
    if lattice.num_sites() != h.num_sites() {
        return Err(Error::DimensionMismatch { expected: lattice.num_sites(), found: h.num_sites() });
    }
    let (inner, _) = cut.split(h)?;
    let prop = Propagator::new(h)?;
    let u_t = prop.unitary(t);
    let u0_t = Propagator::new(&inner)?.unitary(t);
    let all = SiteSet::range(0, h.num_sites());
    let anchors = cut.boundary.iter().fold(SiteSet::empty(), |acc, &k| acc.union(&h.terms()[k].anchor));
    let terms = cut
        .boundary
        .iter()
        .map(|&k| {
            let term = &h.terms()[k];
            let outside = radii.iter().map(|&r| lattice.complement(&lattice.ball(&term.anchor, r))).collect();
            Ok((prop.to_eigenbasis(&term.op)?, outside))
        })
        .collect::<Result<Vec<_>>>()?;
    let gens = Generators { prop: &prop, all: all.clone(), terms };

    let d = prop.dim();
    let mut u = vec![Mat::<C64>::identity(d, d); radii.len()];
    let mut integral = vec![0.0; radii.len()];
    let (mut now, mut steps, mut rejected) = (0.0f64, 0usize, 0usize);
    let mut tau = t.min(0.05);
    let (lo, hi) = (0.5 - 3f64.sqrt() / 6.0, 0.5 + 3f64.sqrt() / 6.0);
    while !cut.boundary.is_empty() && now < t {
        tau = tau.min(t - now);
        if tau < 1e-12 * t.max(1.0) {
            return Err(Error::numerical(format!("decomposition step collapsed at t = {now}")));
        }
        let (f1, big1) = gens.at(now + lo * tau)?;
        let (f2, big2) = gens.at(now + hi * tau)?;
        let half = 0.5 * tau;
        let (_, a1) = gens.at(now + lo * half)?;
        let (_, a2) = gens.at(now + hi * half)?;
        let (_, b1) = gens.at(now + half + lo * half)?;
        let (_, b2) = gens.at(now + half + hi * half)?;
        let mut error = 0.0f64;
        let mut fine = Vec::with_capacity(radii.len());
        for k in 0..radii.len() {
            let coarse = magnus(&big1[k], &big2[k], tau)?;
            let two = magnus(&b1[k], &b2[k], half)? * magnus(&a1[k], &a2[k], half)?;
            // Richardson estimate of the local error of the finer result
            error = error.max(frobenius(&(&coarse - &two)) / 15.0);
            fine.push(two);
        }
        if error <= DECOMPOSITION_TOL {
            for k in 0..radii.len() {
                u[k] = &fine[k] * &u[k];
                let g1 = hermitian_norm((&f1 - &big1[k]).as_ref())?;
                let g2 = hermitian_norm((&f2 - &big2[k]).as_ref())?;
                integral[k] += half * (g1 + g2);
            }
            now += tau;
            steps += 1;
        } else {
            rejected += 1;
        }
        let factor = if error > 0.0 { 0.9 * (DECOMPOSITION_TOL / error).powf(0.2) } else { 2.0 };
        tau *= factor.clamp(0.2, 2.0);
    }
    let points = radii
        .iter()
        .zip(&u)
        .zip(&integral)
        .map(|((&r, u_cut), &integral_bound)| {
            let residual = spectral_norm((&u_t - u_cut * &u0_t).as_ref())?;
            Ok(DecompositionPoint { r, residual, integral_bound, ribbon_size: lattice.ball(&anchors, r).len() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecompositionReport { t, boundary_terms: cut.boundary.len(), points, steps, rejected_steps: rejected })
}
