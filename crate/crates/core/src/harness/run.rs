//! Experiment runners.
//!
//! Work items (realizations, trial blocks, memory seeds) run on a rayon pool
//! of the requested size. Each item draws from its own seed stream and the
//! results are collected in index order, so artifacts do not depend on the
//! number of workers.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::aggregate::Welford;
use super::artifacts::{write_artifact, Artifact, Cell, CsvTable};
use super::config::{Experiment, LemmaKind, RunConfig};
use super::manifest::{RunManifest, SeedRecord};
use crate::bounds::{
    dominance_report, fit_c1, fit_lbit_prefactor, fit_llc_cells, theorem1_curve, DominanceReport, LlcFit,
    Theorem1Inputs,
};
use crate::error::{Error, Result};
use crate::evolve::{Engine, Propagator};
use crate::lattice::{Lattice, SiteSet};
use crate::lemmas::{boundary_decomposition, sie_check, ste_check, CutSpec, DecompositionReport};
use crate::memory::{lifetime_scan, median, PerturbationKind, QuenchSpec, ScanResult};
use crate::models::{build_hamiltonian, HamiltonianTerms, ModelSpec};
use crate::operators::spectral_norm;
use crate::probes::{
    commutator_grid_with, contour_extract, entropy_trace, entropy_trace_with, front_fit, growth_fit, otoc_grid,
    EntropyTrace, FrontFit, GridMeta, GrowthFit, LightConeGrid,
};
use crate::seeding::derive_seed;

/// Slack allowed in the OTOC-commutator inequality before a run aborts.
pub const OTOC_TOL: f64 = 1e-9;

/// Where and how wide a run executes.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub out: PathBuf,
    /// Worker threads; 0 means one per available core.
    pub workers: usize,
}

/// Which probes a realization measures.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProbeSet {
    pub commutator: bool,
    pub otoc: bool,
    pub entropy: bool,
}

/// Measurements on one disorder realization.
#[derive(Clone, Debug)]
pub struct Realization {
    pub index: usize,
    pub seed: u64,
    pub commutator: Option<LightConeGrid>,
    pub otoc: Option<LightConeGrid>,
    pub entropy: Option<EntropyTrace>,
    /// Largest norm of a term crossing the entropy cut.
    pub boundary_norm: f64,
}

/// Seed of realization `k`.
pub fn realization_seeds(cfg: &RunConfig) -> Vec<u64> {
    (0..cfg.run.realizations).map(|k| derive_seed(cfg.master_seed(), k as u64)).collect()
}

fn build_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))
}

/// Runs `f` on a pool of `workers` threads with dense kernels kept sequential.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    faer::set_global_parallelism(faer::Par::Seq);
    Ok(build_pool(workers)?.install(f))
}

fn simulate_one(cfg: &RunConfig, lattice: &Lattice, index: usize, seed: u64, probes: ProbeSet) -> Result<Realization> {
    let h = build_hamiltonian(cfg.model_spec()?, lattice, seed)?;
    let times = cfg.time.grid()?;
    let p = &cfg.probes;
    let krylov_only = !probes.commutator && !probes.otoc && cfg.evolve.engine == Engine::Krylov;
    let prop = if krylov_only { None } else { Some(Propagator::new(&h)?) };
    let distances = p.distances(lattice);
    let grid_meta = |kind: &str| GridMeta { spec_hash: kind.to_string(), seed, probes: format!("{}{} | {}@r", p.x, p.origin, p.y) };
    let mut out = Realization { index, seed, commutator: None, otoc: None, entropy: None, boundary_norm: 0.0 };
    if let Some(prop) = &prop {
        if probes.commutator {
            let mut g = commutator_grid_with(prop, lattice, p.origin, p.x, p.y, &times, &distances)?;
            g.meta = grid_meta("commutator");
            if g.max_value() > 2.0 + 1e-9 {
                return Err(Error::Invariant(format!("commutator norm {} exceeds 2", g.max_value())));
            }
            out.commutator = Some(g);
        }
        if probes.otoc {
            let mut g = otoc_grid(prop, lattice, p.beta, p.origin, p.x, p.y, &times, &distances)?;
            g.meta = grid_meta("otoc");
            if let Some(c) = &out.commutator {
                check_otoc(&g, c)?;
            }
            out.otoc = Some(g);
        }
    }
    if probes.entropy {
        let a = p.cut_side(lattice.num_sites());
        let psi = p.initial_state.build(lattice.num_sites());
        out.entropy = Some(match &prop {
            Some(prop) => entropy_trace_with(prop, &h, &psi, &times, &a)?,
            None => entropy_trace(&h, &psi, &times, &a, Engine::Krylov, cfg.evolve.krylov_dim)?,
        });
        out.boundary_norm = boundary_norm(&h, &a)?;
    }
    Ok(out)
}

fn boundary_norm(h: &HamiltonianTerms, a: &SiteSet) -> Result<f64> {
    h.crossing_terms(a)?
        .into_iter()
        .map(|k| spectral_norm(h.terms()[k].op.matrix()))
        .try_fold(0.0f64, |m, n| Ok(m.max(n?)))
}

/// `C <= ||[W(t), V]||^2 / 2` cell by cell.
fn check_otoc(otoc: &LightConeGrid, comm: &LightConeGrid) -> Result<()> {
    for ((t, r, c), (_, _, k)) in otoc.cells().zip(comm.cells()) {
        if c > 0.5 * k * k + OTOC_TOL {
            return Err(Error::Invariant(format!("OTOC {c} exceeds half the squared commutator {k} at t={t}, r={r}")));
        }
    }
    Ok(())
}

/// Measures every realization of the ensemble on the current pool.
pub fn simulate_ensemble(cfg: &RunConfig, probes: ProbeSet) -> Result<Vec<Realization>> {
    let lattice = cfg.lattice.build()?;
    let seeds = realization_seeds(cfg);
    seeds.par_iter().enumerate().map(|(k, &s)| simulate_one(cfg, &lattice, k, s, probes)).collect()
}

/// Ensemble mean of aligned grids, with standard errors.
#[derive(Clone, Debug)]
pub struct GridSummary {
    pub mean: LightConeGrid,
    pub std_error: Vec<Vec<f64>>,
    pub count: usize,
}

pub fn summarize_grids(grids: &[&LightConeGrid]) -> Result<GridSummary> {
    let first = grids.first().ok_or_else(|| Error::domain("no grids to summarize"))?;
    let (nt, nr) = (first.times.len(), first.distances.len());
    let mut acc = vec![vec![Welford::new(); nr]; nt];
    for g in grids {
        if g.times != first.times || g.distances != first.distances {
            return Err(Error::domain("grids of an ensemble must share their axes"));
        }
        for (ti, row) in g.values.iter().enumerate() {
            for (ri, &v) in row.iter().enumerate() {
                acc[ti][ri].push(v);
            }
        }
    }
    let mean = acc.iter().map(|row| row.iter().map(Welford::mean).collect()).collect();
    let std_error = acc.iter().map(|row| row.iter().map(Welford::std_error).collect()).collect();
    let meta = GridMeta { probes: first.meta.probes.clone(), ..GridMeta::default() };
    Ok(GridSummary {
        mean: LightConeGrid::new(first.times.clone(), first.distances.clone(), mean, meta)?,
        std_error,
        count: grids.len(),
    })
}

/// Front of the ensemble-mean grid at one threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontReport {
    pub theta: f64,
    pub contour_points: usize,
    pub omitted: usize,
    pub fit: Option<FrontFit>,
    pub error: Option<String>,
}

/// Summary of a light-cone or OTOC ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub realizations: usize,
    pub max_value: f64,
    pub fronts: Vec<FrontReport>,
    /// Logarithmic light-cone parameters fitted to the pooled cells.
    pub llc: Option<LlcFit>,
    pub llc_error: Option<String>,
    /// Smallest `c` with `c t e^{-r/(2 xi')}` above every cell, for l-bit models.
    pub lbit_prefactor: Option<f64>,
    /// Largest `C - ||[W(t), V]||^2 / 2` when both grids were measured.
    pub max_otoc_excess: Option<f64>,
}

fn grid_rows(realizations: &[Realization], pick: impl Fn(&Realization) -> Option<&LightConeGrid>) -> Vec<Vec<Cell>> {
    let mut rows = Vec::new();
    for real in realizations {
        if let Some(g) = pick(real) {
            for (ri, &r) in g.distances.iter().enumerate() {
                for (ti, &t) in g.times.iter().enumerate() {
                    rows.push(vec![real.seed.into(), real.index.into(), r.into(), t.into(), g.values[ti][ri].into()]);
                }
            }
        }
    }
    rows
}

/// Reports and artifacts for the grids selected by `pick`.
pub fn grid_artifacts(
    cfg: &RunConfig,
    realizations: &[Realization],
    prefix: &str,
    pick: impl Fn(&Realization) -> Option<&LightConeGrid>,
) -> Result<(GridReport, Vec<Artifact>)> {
    let grids: Vec<&LightConeGrid> = realizations.iter().filter_map(&pick).collect();
    let summary = summarize_grids(&grids)?;
    let mut contour_rows = Vec::new();
    let mut fronts = Vec::new();
    for &theta in &cfg.probes.thetas {
        let c = contour_extract(&summary.mean, theta)?;
        contour_rows.extend(c.rows.iter().map(|&(t, r)| vec![theta.into(), t.into(), r.into()]));
        let (fit, error) = match front_fit(&c) {
            Ok(f) => (Some(f), None),
            Err(e) => (None, Some(e.to_string())),
        };
        fronts.push(FrontReport { theta, contour_points: c.rows.len(), omitted: c.omitted, fit, error });
    }
    let cells: Vec<(f64, f64, f64)> =
        grids.iter().flat_map(|g| g.cells().map(|(t, r, v)| (t, r as f64, v)).collect::<Vec<_>>()).collect();
    let (llc, llc_error) = match fit_llc_cells(&cells) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let lbit_prefactor = match cfg.model_spec()? {
        ModelSpec::Lbit(spec) => Some(fit_lbit_prefactor(&cells, spec.xi)?),
        _ => None,
    };
    let max_otoc_excess = realizations
        .iter()
        .filter_map(|r| Some((r.otoc.as_ref()?, r.commutator.as_ref()?)))
        .flat_map(|(o, c)| o.cells().zip(c.cells()).map(|((_, _, x), (_, _, k))| x - 0.5 * k * k).collect::<Vec<_>>())
        .reduce(f64::max);
    let report = GridReport {
        realizations: grids.len(),
        max_value: grids.iter().map(|g| g.max_value()).fold(0.0, f64::max),
        fronts,
        llc,
        llc_error,
        lbit_prefactor,
        max_otoc_excess,
    };
    let mut summary_rows = Vec::new();
    for (ri, &r) in summary.mean.distances.iter().enumerate() {
        for (ti, &t) in summary.mean.times.iter().enumerate() {
            summary_rows.push(vec![
                r.into(),
                t.into(),
                summary.mean.values[ti][ri].into(),
                summary.std_error[ti][ri].into(),
                summary.count.into(),
            ]);
        }
    }
    let artifacts = vec![
        Artifact::csv(&format!("{prefix}.csv"), &["seed", "realization", "r", "t", "value"], &grid_rows(realizations, &pick))?,
        Artifact::csv(&format!("{prefix}_summary.csv"), &["r", "t", "mean", "stderr", "count"], &summary_rows)?,
        Artifact::csv(&format!("{prefix}_contour.csv"), &["theta", "t", "r_theta"], &contour_rows)?,
        Artifact::json(&format!("{prefix}_fit.json"), &report)?,
    ];
    Ok((report, artifacts))
}

/// Theorem-1 bound fitted on the training window and checked on later times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyBoundReport {
    /// Inputs with the fitted `c1`.
    pub inputs: Theorem1Inputs,
    pub train: DominanceReport,
    pub held_out: DominanceReport,
    /// Held-out times.
    pub held_out_times: Vec<f64>,
    /// Points where the trivial cap is the binding bound.
    pub capped_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub realizations: usize,
    pub boundary_size: usize,
    pub growth: Option<GrowthFit>,
    pub growth_error: Option<String>,
    pub bound: Option<EntropyBoundReport>,
    pub bound_error: Option<String>,
}

/// Ensemble mean of `delta S` in bits, per time.
pub fn mean_entropy_growth(traces: &[&EntropyTrace]) -> Result<(Vec<f64>, Vec<Welford>, Vec<Welford>)> {
    let first = traces.first().ok_or_else(|| Error::domain("no entropy traces"))?;
    let mut s = vec![Welford::new(); first.times.len()];
    let mut ds = vec![Welford::new(); first.times.len()];
    for tr in traces {
        if tr.times != first.times {
            return Err(Error::domain("entropy traces must share their times"));
        }
        for (k, (&a, &b)) in tr.s_bits.iter().zip(&tr.delta_bits).enumerate() {
            s[k].push(a);
            ds[k].push(b);
        }
    }
    Ok((first.times.clone(), s, ds))
}

fn bound_inputs(cfg: &RunConfig, boundary: usize, j: f64) -> Result<Theorem1Inputs> {
    let b = &cfg.bounds;
    let xi = match (b.xi, cfg.model_spec()?) {
        (x, _) if x > 0.0 => x,
        (_, ModelSpec::Lbit(spec)) => 2.0 * spec.xi,
        _ => return Err(Error::Config("bounds.xi is required for models other than lbit".into())),
    };
    let n = cfg.lattice.build()?.num_sites();
    let a = cfg.probes.cut_side(n).len();
    let smaller = a.min(n - a) as f64;
    let r_max = if b.r_max > 0.0 { b.r_max } else { smaller.max(b.r_min) };
    Ok(Theorem1Inputs {
        boundary: boundary.max(1) as f64,
        xi,
        alpha: b.alpha,
        c1: 1.0,
        j: if j > 0.0 { j } else { 1.0 },
        r_min: b.r_min,
        r_max,
        cap: Some(smaller * std::f64::consts::LN_2),
    })
}

fn entropy_bound(cfg: &RunConfig, times: &[f64], ds_nats: &[f64], boundary: usize, j: f64) -> Result<EntropyBoundReport> {
    let [t0, t1] = cfg.bounds.train_window;
    let t_end = cfg.bounds.fit_window[1];
    let base = bound_inputs(cfg, boundary, j)?;
    let train: Vec<(f64, f64)> =
        times.iter().zip(ds_nats).filter(|(t, _)| **t >= t0 && **t <= t1).map(|(&t, &s)| (t, s)).collect();
    let held: Vec<(f64, f64)> =
        times.iter().zip(ds_nats).filter(|(t, _)| **t > t1 && **t <= t_end).map(|(&t, &s)| (t, s)).collect();
    if train.is_empty() || held.is_empty() {
        return Err(Error::Config("bound training or validation window contains no times".into()));
    }
    let inputs = base.with_c1(fit_c1(&base, &train)?);
    let check = |pts: &[(f64, f64)]| -> Result<(DominanceReport, usize)> {
        let (t, s): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
        let curve = theorem1_curve(&inputs, &t)?;
        let capped = curve.diagnostics.iter().filter(|d| d.name() == "cap").count();
        Ok((dominance_report(&s, &curve.bounds, 1e-12)?, capped))
    };
    let (train_rep, c0) = check(&train)?;
    let (held_rep, c1) = check(&held)?;
    Ok(EntropyBoundReport {
        inputs,
        train: train_rep,
        held_out: held_rep,
        held_out_times: held.iter().map(|p| p.0).collect(),
        capped_points: c0 + c1,
    })
}

pub fn entropy_artifacts(cfg: &RunConfig, realizations: &[Realization]) -> Result<(EntropyReport, Vec<Artifact>)> {
    let traces: Vec<&EntropyTrace> = realizations.iter().filter_map(|r| r.entropy.as_ref()).collect();
    let (times, s, ds) = mean_entropy_growth(&traces)?;
    let boundary = traces.iter().map(|t| t.boundary_size).max().unwrap_or(0);
    let j = realizations.iter().map(|r| r.boundary_norm).fold(0.0, f64::max);
    let [w0, w1] = cfg.bounds.fit_window;
    let window: Vec<(f64, f64)> =
        times.iter().zip(&ds).filter(|(t, _)| **t >= w0 && **t <= w1).map(|(&t, w)| (t, w.mean())).collect();
    let (growth, growth_error) = match growth_fit(&window) {
        Ok(g) => (Some(g), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let ln2 = std::f64::consts::LN_2;
    log::debug!("entropy bound compares nats: bits are multiplied by {ln2}");
    let ds_nats: Vec<f64> = ds.iter().map(|w| w.mean() * ln2).collect();
    let (bound, bound_error) = match entropy_bound(cfg, &times, &ds_nats, boundary, j) {
        Ok(b) => (Some(b), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let mut rows = Vec::new();
    for (real, tr) in realizations.iter().filter_map(|r| Some((r, r.entropy.as_ref()?))) {
        for (&t, &v) in tr.times.iter().zip(&tr.s_bits) {
            rows.push(vec![real.seed.into(), real.index.into(), t.into(), v.into()]);
        }
    }
    let summary: Vec<Vec<Cell>> = times
        .iter()
        .zip(s.iter().zip(&ds))
        .map(|(&t, (a, b))| {
            vec![t.into(), a.mean().into(), a.std_error().into(), b.mean().into(), b.std_error().into(), a.count().into()]
        })
        .collect();
    let mut artifacts = vec![
        Artifact::csv("entropy.csv", &["seed", "realization", "t", "S_bits"], &rows)?,
        Artifact::csv(
            "entropy_summary.csv",
            &["t", "S_bits_mean", "S_bits_stderr", "delta_S_bits_mean", "delta_S_bits_stderr", "count"],
            &summary,
        )?,
    ];
    if let Some(b) = &bound {
        let positive: Vec<f64> = times.iter().copied().filter(|&t| t > 0.0).collect();
        artifacts.push(theorem1_artifact(&b.inputs, &positive)?);
    }
    let report = EntropyReport { realizations: traces.len(), boundary_size: boundary, growth, growth_error, bound, bound_error };
    artifacts.push(Artifact::json("entropy_fit.json", &report)?);
    Ok((report, artifacts))
}

/// `t,bound,r_star,diag` with the bound in nats.
pub fn theorem1_artifact(inputs: &Theorem1Inputs, times: &[f64]) -> Result<Artifact> {
    let curve = theorem1_curve(inputs, times)?;
    let rows: Vec<Vec<Cell>> = (0..times.len())
        .map(|k| {
            vec![
                curve.times[k].into(),
                curve.bounds[k].into(),
                curve.r_star[k].into(),
                curve.diagnostics[k].name().into(),
            ]
        })
        .collect();
    Artifact::csv("theorem1.csv", &["t", "bound", "r_star", "diag"], &rows)
}

/// Light-cone parameters fitted to a stored light-cone CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsFitReport {
    #[serde(rename = "C")]
    pub c: f64,
    pub alpha: f64,
    pub xi: f64,
    /// Standard errors of `(C, alpha, xi)`.
    pub stderr: [f64; 3],
    /// Fraction of admissible cells above the bound.
    pub violations: f64,
    pub violations_before_lift: f64,
    pub c_ols: f64,
    pub cells_used: usize,
}

pub fn bounds_fit_from_csv(path: &Path) -> Result<BoundsFitReport> {
    let table = CsvTable::load(path)?;
    table.expect_header(&["seed", "realization", "r", "t", "value"])?;
    let (r, t, v) = (table.column("r")?, table.column("t")?, table.column("value")?);
    let cells = (0..table.len())
        .map(|k| Ok((table.number(k, t)?, table.number(k, r)?, table.number(k, v)?)))
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_llc_cells(&cells)?;
    Ok(BoundsFitReport {
        c: fit.params.c,
        alpha: fit.params.alpha,
        xi: fit.params.xi,
        stderr: fit.stderr,
        violations: fit.violations,
        violations_before_lift: fit.violations_before,
        c_ols: fit.c_ols,
        cells_used: fit.cells_used,
    })
}

/// Outcome of one lemma check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub which: LemmaKind,
    pub trials: usize,
    /// Largest amount by which any trial exceeded its bound; 0 if none did.
    pub max_violation: f64,
    /// Largest observed value of the bounded quantity, in the units of the bound.
    pub empirical_max: f64,
    pub violations: usize,
    pub details: serde_json::Value,
}

/// Decomposition check over disorder realizations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub reports: Vec<DecompositionReport>,
    /// Pairs of consecutive radii where the residual grew by more than `1e-6`.
    pub monotonicity_violations: usize,
    /// Least-squares slope of `ln residual` against `r`, per realization.
    pub slopes: Vec<Option<f64>>,
}

fn log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|p| p.1 > 0.0).map(|&(r, v)| (r, v.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn decomposition_check(cfg: &RunConfig) -> Result<(LemmaReport, Vec<u64>)> {
    let lattice = cfg.lattice.build()?;
    let spec = cfg.model_spec()?;
    let seeds = realization_seeds(cfg);
    let reports = seeds
        .par_iter()
        .map(|&s| {
            let h = build_hamiltonian(spec, &lattice, s)?;
            let cut = CutSpec::new(&h, cfg.probes.cut_side(lattice.num_sites()))?;
            boundary_decomposition(&h, &lattice, &cut, &cfg.lemmas.radii, cfg.lemmas.t)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut max_violation = 0.0f64;
    let mut empirical_max = 0.0f64;
    let mut violations = 0;
    let mut monotonicity_violations = 0;
    for rep in &reports {
        for p in &rep.points {
            let excess = p.residual - p.integral_bound;
            if excess > 1e-6 {
                violations += 1;
            }
            max_violation = max_violation.max(excess.max(0.0));
            if p.integral_bound > 0.0 {
                empirical_max = empirical_max.max(p.residual / p.integral_bound);
            }
        }
        monotonicity_violations += rep.points.windows(2).filter(|w| w[1].residual > w[0].residual + 1e-6).count();
    }
    let slopes = reports
        .iter()
        .map(|r| log_slope(&r.points.iter().map(|p| (p.r as f64, p.residual)).collect::<Vec<_>>()))
        .collect();
    let summary = DecompositionSummary { reports, monotonicity_violations, slopes };
    let report = LemmaReport {
        which: LemmaKind::Decomposition,
        trials: seeds.len(),
        max_violation,
        empirical_max,
        violations: violations + monotonicity_violations,
        details: serde_json::to_value(&summary)?,
    };
    Ok((report, seeds))
}

/// Runs one lemma check with trial streams derived from the master seed.
pub fn lemma_check(cfg: &RunConfig, which: LemmaKind) -> Result<(LemmaReport, Vec<u64>)> {
    let seed = derive_seed(cfg.master_seed(), which as u64);
    let trials = cfg.lemmas.trials;
    match which {
        LemmaKind::Sie => {
            let rep = sie_check(trials, seed)?;
            let report = LemmaReport {
                which,
                trials,
                max_violation: (rep.empirical_max - crate::lemmas::SIE_CONSTANT).max(0.0),
                empirical_max: rep.empirical_max,
                violations: rep.violations + rep.fd_failures,
                details: serde_json::to_value(&rep)?,
            };
            Ok((report, vec![seed]))
        }
        LemmaKind::Ste => {
            let seeds: Vec<u64> = (0..cfg.lemmas.ste_sizes.len()).map(|k| derive_seed(seed, k as u64)).collect();
            let reps = cfg
                .lemmas
                .ste_sizes
                .par_iter()
                .zip(&seeds)
                .map(|(&[a, b], &s)| ste_check(trials, a, b, s))
                .collect::<Result<Vec<_>>>()?;
            let report = LemmaReport {
                which,
                trials,
                max_violation: reps.iter().map(|r| (r.max_delta_bits - r.bound_bits).max(0.0)).fold(0.0, f64::max),
                empirical_max: reps.iter().map(|r| r.max_delta_bits).fold(f64::NEG_INFINITY, f64::max),
                violations: reps.iter().map(|r| r.violations).sum(),
                details: serde_json::to_value(&reps)?,
            };
            Ok((report, seeds))
        }
        LemmaKind::Decomposition => decomposition_check(cfg),
    }
}

/// Per-variant scans and their comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemorySummary {
    pub threshold: f64,
    /// First crossing of the threshold per variant and seed; `null` if never.
    pub t_est: BTreeMap<String, Vec<Option<f64>>>,
    /// Max-over-probes deviation at the last time, per variant and seed.
    pub max_deviation_at_tmax: BTreeMap<String, Vec<f64>>,
    /// Median over seeds of ergodic over localized deviation at the last time.
    pub ratio_at_tmax: Option<f64>,
    pub ratios: Vec<f64>,
    /// Localized deviation strictly below ergodic at the last time for every seed.
    pub ordering_holds: Option<bool>,
    pub excluded_probes: Vec<String>,
}

pub fn memory_scans(cfg: &RunConfig) -> Result<(Vec<ScanResult>, Vec<u64>)> {
    let m = &cfg.memory;
    let times = cfg.time.grid()?;
    let seeds: Vec<u64> = (0..m.seeds).map(|k| derive_seed(cfg.master_seed(), k as u64)).collect();
    let items: Vec<(PerturbationKind, u64)> =
        m.variants.iter().flat_map(|&v| seeds.iter().map(move |&s| (v, s))).collect();
    let scans = items
        .par_iter()
        .map(|&(variant, seed)| {
            let q = QuenchSpec {
                code: m.code,
                gap: m.gap,
                strength: m.strength,
                perturbation: variant,
                dressing: m.dressing.clone(),
                times: times.clone(),
                threshold: m.threshold,
            };
            lifetime_scan(&q, seed)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((scans, seeds))
}

pub fn memory_summary(cfg: &RunConfig, scans: &[ScanResult]) -> MemorySummary {
    let mut t_est: BTreeMap<String, Vec<Option<f64>>> = BTreeMap::new();
    let mut finals: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for s in scans {
        let name = s.variant.name().to_string();
        t_est.entry(name.clone()).or_default().push(s.t_est.is_finite().then_some(s.t_est));
        finals.entry(name).or_default().push(s.final_max_deviation());
    }
    let pair = (finals.get(PerturbationKind::LbitLike.name()), finals.get(PerturbationKind::Ergodic.name()));
    let (ratios, ordering) = match pair {
        (Some(l), Some(e)) => (
            l.iter().zip(e).map(|(a, b)| if *a > 0.0 { b / a } else { f64::INFINITY }).collect::<Vec<_>>(),
            Some(l.iter().zip(e).all(|(a, b)| a < b)),
        ),
        _ => (Vec::new(), None),
    };
    MemorySummary {
        threshold: cfg.memory.threshold,
        t_est,
        max_deviation_at_tmax: finals,
        ratio_at_tmax: (!ratios.is_empty()).then(|| median(&ratios)),
        ratios,
        ordering_holds: ordering,
        excluded_probes: scans.first().map(|s| s.excluded_probes.clone()).unwrap_or_default(),
    }
}

pub fn memory_artifacts(cfg: &RunConfig, scans: &[ScanResult]) -> Result<(MemorySummary, Vec<Artifact>)> {
    let rows: Vec<Vec<Cell>> = scans
        .iter()
        .flat_map(|s| s.rows.iter())
        .map(|r| {
            vec![r.seed.into(), r.variant.name().into(), r.op_id.as_str().into(), r.t.into(), r.deviation.into(), r.z_star.into()]
        })
        .collect();
    let summary = memory_summary(cfg, scans);
    Ok((
        summary.clone(),
        vec![
            Artifact::csv("memory.csv", &["seed", "variant", "op_id", "t", "deviation", "z_star"], &rows)?,
            Artifact::json("memory_summary.json", &summary)?,
        ],
    ))
}

fn seed_records(seeds: &[u64]) -> Vec<SeedRecord> {
    seeds.iter().enumerate().map(|(index, &seed)| SeedRecord { index, seed }).collect()
}

fn execute(exp: Experiment, cfg: &RunConfig, manifest: &mut RunManifest) -> Result<Vec<Artifact>> {
    match exp {
        Experiment::Lightcone | Experiment::Otoc | Experiment::Entropy => {
            manifest.seeds = seed_records(&realization_seeds(cfg));
            let probes = match exp {
                Experiment::Lightcone => ProbeSet { commutator: true, ..ProbeSet::default() },
                Experiment::Otoc => ProbeSet { commutator: true, otoc: true, ..ProbeSet::default() },
                _ => ProbeSet { entropy: true, ..ProbeSet::default() },
            };
            let reals = simulate_ensemble(cfg, probes)?;
            Ok(match exp {
                Experiment::Lightcone => grid_artifacts(cfg, &reals, "lightcone", |r| r.commutator.as_ref())?.1,
                Experiment::Otoc => grid_artifacts(cfg, &reals, "otoc", |r| r.otoc.as_ref())?.1,
                _ => entropy_artifacts(cfg, &reals)?.1,
            })
        }
        Experiment::BoundsEval => {
            let inputs = cfg.bounds.theorem1.ok_or_else(|| Error::Config("missing [bounds.theorem1]".into()))?;
            let times: Vec<f64> = cfg.time.grid()?;
            Ok(vec![theorem1_artifact(&inputs, &times)?])
        }
        Experiment::BoundsFit => {
            let path = cfg.bounds.grid.clone().ok_or_else(|| Error::Config("missing bounds.grid".into()))?;
            manifest.record_input(&path)?;
            Ok(vec![Artifact::json("bounds_fit.json", &bounds_fit_from_csv(&path)?)?])
        }
        Experiment::Lemmas => {
            let mut artifacts = Vec::new();
            for &which in &cfg.lemmas.which {
                let (report, seeds) = lemma_check(cfg, which)?;
                manifest.seeds.extend(seed_records(&seeds));
                artifacts.push(Artifact::json(&format!("lemma_{}.json", which.name()), &report)?);
            }
            Ok(artifacts)
        }
        Experiment::Memory => {
            let (scans, seeds) = memory_scans(cfg)?;
            manifest.seeds = seed_records(&seeds);
            Ok(memory_artifacts(cfg, &scans)?.1)
        }
    }
}

/// Validates `cfg`, runs its experiment and writes artifacts plus manifest
/// into `opts.out`.
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<RunManifest> {
    cfg.validate()?;
    let exp = cfg.run.experiment.ok_or_else(|| Error::Config("run.experiment is not set".into()))?;
    std::fs::create_dir_all(&opts.out)?;
    let mut manifest = RunManifest::start(exp.name(), cfg);
    manifest.write(&opts.out)?;
    let result = with_workers(opts.workers, || execute(exp, cfg, &mut manifest)).and_then(|r| r);
    match result {
        Ok(artifacts) => {
            for a in &artifacts {
                manifest.artifacts.push(write_artifact(&opts.out, a)?);
            }
            manifest.complete();
            manifest.write(&opts.out)?;
            Ok(manifest)
        }
        Err(e) => {
            manifest.fail(&e);
            manifest.write(&opts.out)?;
            Err(e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(text: &str) -> RunConfig {
        RunConfig::from_toml_str(text).unwrap()
    }

    #[test]
    fn grid_summary_averages_cells() {
        let g = |v: f64| LightConeGrid::new(vec![1.0], vec![1, 2], vec![vec![v, 2.0 * v]], GridMeta::default()).unwrap();
        let (a, b) = (g(0.0), g(2.0));
        let s = summarize_grids(&[&a, &b]).unwrap();
        assert_eq!(s.mean.values, vec![vec![1.0, 2.0]]);
        assert_eq!(s.std_error, vec![vec![1.0, 2.0]]);
    }

    #[test]
    fn otoc_run_writes_all_artifacts() {
        let cfg = small_config(
            "[run]\nexperiment = \"otoc\"\nrealizations = 2\n[lattice]\nsize = 4\n\
             [model]\nvariant = \"disordered-xxz\"\nj = 1.0\njz = 1.0\ndisorder = 1.0\n\
             [time]\nt_min = 0.5\nt_max = 4.0\npoints = 6\n",
        );
        let dir = tempfile::tempdir().unwrap();
        let m = run(&cfg, &RunOptions { out: dir.path().to_path_buf(), workers: 1 }).unwrap();
        assert_eq!(m.artifacts.len(), 4);
        assert_eq!(m.seeds.len(), 2);
        let table = CsvTable::load(&dir.path().join("otoc.csv")).unwrap();
        assert_eq!(table.len(), 2 * 3 * 6);
    }

    #[test]
    fn missing_experiment_is_a_config_error() {
        let cfg = small_config("[lattice]\nsize = 4\n");
        let dir = tempfile::tempdir().unwrap();
        let err = run(&cfg, &RunOptions { out: dir.path().to_path_buf(), workers: 1 }).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}
