//! Lifetime scans: deviation curves of local probes after a quench
//! `H_0 -> H_0 + s V`.

use serde::{Deserialize, Serialize};

use super::accuracy::{compress_pauli, evolved_basis, hermitian_deviation, Accuracy};
use super::code::{build_code, perturbed_hamiltonian, CodeKind, PerturbationKind, StabilizerCode};
use crate::error::{Error, Result};
use crate::evolve::Propagator;
use crate::models::LbitSpec;
use crate::operators::{Pauli, PauliString};

/// Everything that defines one quench experiment except the seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuenchSpec {
    pub code: CodeKind,
    pub gap: f64,
    pub strength: f64,
    pub perturbation: PerturbationKind,
    pub dressing: LbitSpec,
    pub times: Vec<f64>,
    /// Deviation level `eps'` that ends the lifetime.
    pub threshold: f64,
}

impl QuenchSpec {
    pub fn new(code: CodeKind, strength: f64, perturbation: PerturbationKind, times: Vec<f64>) -> Self {
        QuenchSpec {
            code,
            gap: 1.0,
            strength,
            perturbation,
            dressing: LbitSpec::perturbation_default(),
            times,
            threshold: 0.1,
        }
    }
}

/// A probe operator with its identifier and diameter on the qubit chain.
#[derive(Clone, Debug, PartialEq)]
pub struct Probe {
    pub id: String,
    pub op: PauliString,
    pub diameter: usize,
}

/// Single-site Paulis whose compression at `t = 0` is already within
/// `threshold` of a multiple of `P`. Probes that act as logical operators are
/// excluded: they are not protected at any time.
pub fn select_probes(code: &StabilizerCode, threshold: f64) -> Result<(Vec<Probe>, Vec<String>)> {
    let basis = code.basis();
    let mut kept = Vec::new();
    let mut excluded = Vec::new();
    for site in 0..code.num_qubits() {
        for kind in Pauli::ALL {
            let op = PauliString::single(site, kind);
            let id = format!("{kind}{site}");
            let m = compress_pauli(&op, basis.as_ref(), code.num_qubits())?;
            if hermitian_deviation(m.as_ref())?.deviation <= threshold {
                kept.push(Probe { id, op, diameter: 0 });
            } else {
                excluded.push(id);
            }
        }
    }
    Ok((kept, excluded))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub seed: u64,
    pub variant: PerturbationKind,
    pub op_id: String,
    pub t: f64,
    pub deviation: f64,
    pub z_star: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult {
    pub seed: u64,
    pub variant: PerturbationKind,
    pub rows: Vec<ScanRow>,
    /// `(t, max over probes of the deviation)`.
    pub summary: Vec<(f64, f64)>,
    /// First time the summary exceeds the threshold; infinite if never.
    pub t_est: f64,
    pub excluded_probes: Vec<String>,
}

impl ScanResult {
    pub fn max_deviation_at(&self, index: usize) -> f64 {
        self.summary[index].1
    }

    pub fn final_max_deviation(&self) -> f64 {
        self.summary.last().map_or(0.0, |s| s.1)
    }
}

/// Runs one quench for one disorder seed.
pub fn lifetime_scan(q: &QuenchSpec, seed: u64) -> Result<ScanResult> {
    if q.times.is_empty() {
        return Err(Error::Config("memory scan needs at least one time".into()));
    }
    if !(q.strength.is_finite() && q.strength >= 0.0) {
        return Err(Error::Config("memory.strength must be non-negative".into()));
    }
    let code = build_code(&q.code)?;
    let h = perturbed_hamiltonian(&code, q.gap, q.strength, q.perturbation, &q.dressing, seed)?;
    let prop = Propagator::new(&h)?;
    let (probes, excluded) = select_probes(&code, q.threshold)?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for &t in &q.times {
        let evolved = evolved_basis(&code, &prop, t)?;
        let mut worst = 0.0f64;
        for p in &probes {
            let Accuracy { deviation, z_star } =
                hermitian_deviation(compress_pauli(&p.op, evolved.as_ref(), code.num_qubits())?.as_ref())?;
            worst = worst.max(deviation);
            rows.push(ScanRow { seed, variant: q.perturbation, op_id: p.id.clone(), t, deviation, z_star: z_star.re });
        }
        summary.push((t, worst));
    }
    let t_est = summary.iter().find(|(_, d)| *d > q.threshold).map_or(f64::INFINITY, |(t, _)| *t);
    Ok(ScanResult { seed, variant: q.perturbation, rows, summary, t_est, excluded_probes: excluded })
}

/// Localized versus ergodic comparison over several seeds.
#[derive(Clone, Debug)]
pub struct VariantComparison {
    pub lbit_like: Vec<ScanResult>,
    pub ergodic: Vec<ScanResult>,
    /// Per seed: ergodic over localized max deviation at the last time.
    pub ratios: Vec<f64>,
    pub median_ratio: f64,
    /// Localized final max deviation strictly below the ergodic one for every seed.
    pub ordering_holds: bool,
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) }
}

/// Runs both perturbation variants for every seed.
pub fn compare_variants(base: &QuenchSpec, seeds: &[u64]) -> Result<VariantComparison> {
    let run = |kind: PerturbationKind| -> Result<Vec<ScanResult>> {
        let q = QuenchSpec { perturbation: kind, ..base.clone() };
        seeds.iter().map(|&s| lifetime_scan(&q, s)).collect()
    };
    let lbit_like = run(PerturbationKind::LbitLike)?;
    let ergodic = run(PerturbationKind::Ergodic)?;
    let ratios: Vec<f64> = lbit_like
        .iter()
        .zip(&ergodic)
        .map(|(l, e)| {
            let (a, b) = (l.final_max_deviation(), e.final_max_deviation());
            if a > 0.0 { b / a } else { f64::INFINITY }
        })
        .collect();
    let ordering_holds =
        lbit_like.iter().zip(&ergodic).all(|(l, e)| l.final_max_deviation() < e.final_max_deviation());
    Ok(VariantComparison { median_ratio: median(&ratios), lbit_like, ergodic, ratios, ordering_holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unperturbed_memory_is_frozen() {
        let q = QuenchSpec::new(CodeKind::Toric2x2, 0.0, PerturbationKind::Ergodic, vec![0.0, 1.0, 100.0]);
        let r = lifetime_scan(&q, 1).unwrap();
        assert!(r.t_est.is_infinite());
        assert!(r.summary.iter().all(|(_, d)| d.abs() < 1e-10));
    }

    #[test]
    fn repetition_probes_exclude_logical_z() {
        let code = build_code(&CodeKind::Repetition { length: 3 }).unwrap();
        let (probes, excluded) = select_probes(&code, 0.1).unwrap();
        assert_eq!(probes.len(), 6);
        assert_eq!(excluded, vec!["Z0", "Z1", "Z2"]);
    }

    #[test]
    fn median_of_even_count() {
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
    }
}
