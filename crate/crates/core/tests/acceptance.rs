//! Acceptance run: nine end-to-end criteria, one PASS or FAIL line each.
//!
//! The run is a report. It exits 0 once every criterion has been evaluated,
//! whatever the verdicts; set `LLC_LAB_ACCEPTANCE_STRICT=1` to exit 1 when
//! any criterion fails. A panic or library error always exits non-zero.

use std::path::Path;
use std::time::Instant;

use llc_lab::bounds::{fit_lbit_prefactor, lambert_residual, lambert_w, Branch, BRANCH_POINT};
use llc_lab::evolve::{time_grid, Propagator, Spacing};
use llc_lab::harness::{
    decomposition_check, entropy_artifacts, grid_artifacts, memory_scans, memory_summary, run, simulate_ensemble,
    with_workers, DecompositionSummary, GridReport, ProbeSet, Realization, RunConfig, RunOptions,
};
use llc_lab::lemmas::{sie_check, ste_check};
use llc_lab::memory::ScanResult;
use llc_lab::models::{build_hamiltonian, ModelSpec};
use llc_lab::probes::{entropy_trace_with, growth_fit, otoc_grid, FrontModel, LightConeGrid};
use llc_lab::seeding::derive_seed;
use llc_lab::{Pauli, SiteSet, StateVector};

type Outcome = llc_lab::Result<(bool, String)>;

const MASTER_SEED: u64 = 2024;

/// Reference value of `W_{-1}(-0.1)`.
const WM1_AT_MINUS_TENTH: f64 = -3.5771520639572972;

fn verdict(pass: bool) -> &'static str {
    if pass { "PASS" } else { "FAIL" }
}

fn config(text: &str) -> RunConfig {
    RunConfig::from_toml_str(text).expect("acceptance configuration")
}

fn log_points(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
}

fn lambert() -> Outcome {
    let n = 10_000;
    let principal: Vec<f64> = (0..n / 2)
        .map(|k| BRANCH_POINT * (1.0 - k as f64 / (n / 2) as f64))
        .chain(log_points(1e-12, 1e12, n / 2))
        .collect();
    let lower: Vec<f64> = log_points(1e-15, 1.0 - 1e-12, n).map(|u| BRANCH_POINT * (1.0 - u)).collect();
    let worst = |b: Branch, xs: &[f64]| -> llc_lab::Result<f64> {
        xs.iter().try_fold(0.0f64, |m, &x| Ok(m.max(lambert_residual(lambert_w(b, x)?, x))))
    };
    let (r0, r1) = (worst(Branch::Principal, &principal)?, worst(Branch::Lower, &lower)?);
    let at_branch = lambert_w(Branch::Lower, BRANCH_POINT)?;
    let at_tenth = lambert_w(Branch::Lower, -0.1)?;
    let pass = r0 <= 1e-12
        && r1 <= 1e-12
        && (at_branch + 1.0).abs() <= 1e-9
        && (at_tenth - WM1_AT_MINUS_TENTH).abs() <= 1e-9;
    Ok((
        pass,
        format!(
            "max residual W0 {r0:.1e}, W-1 {r1:.1e} over {n} points each; W-1(-1/e) = {at_branch:.12}; W-1(-0.1) = {at_tenth:.12}"
        ),
    ))
}

fn ste() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for a in [1, 2] {
        let r = ste_check(1000, a, a, derive_seed(MASTER_SEED, a as u64))?;
        pass &= r.violations == 0;
        parts.push(format!("a=b={a}: {} violations, max dS {:.4} of {} bits", r.violations, r.max_delta_bits, r.bound_bits));
    }
    Ok((pass, parts.join("; ")))
}

fn sie() -> Outcome {
    let r = sie_check(1000, derive_seed(MASTER_SEED, 3))?;
    Ok((
        r.violations == 0 && r.fd_failures == 0,
        format!(
            "{} trials, {} violations, max |Gamma|/(ln2 ||H|| min(a,b)) = {:.3}; {} finite-difference mismatches (max error {:.1e})",
            r.trials, r.violations, r.empirical_max, r.fd_failures, r.max_fd_error
        ),
    ))
}

const LBIT: &str = r#"
[run]
realizations = 20
[lattice]
size = 10
[model]
variant = "lbit"
seed = 2024
xi = 0.5
angle = 1.5
range = 10
[time]
t_min = 1.0
t_max = 1000.0
points = 12
[probes]
distances = [1, 2, 3, 4, 5, 6, 7, 8]
thetas = [0.01]
[bounds]
train_window = [10.0, 100.0]
fit_window = [10.0, 1000.0]
"#;

struct LbitEnsemble {
    cfg: RunConfig,
    reals: Vec<Realization>,
    comm: GridReport,
    otoc: GridReport,
}

fn cells(grids: &[&LightConeGrid]) -> Vec<(f64, f64, f64)> {
    grids.iter().flat_map(|g| g.cells().map(|(t, r, v)| (t, r as f64, v)).collect::<Vec<_>>()).collect()
}

fn light_cone(e: &LbitEnsemble) -> Outcome {
    let xi_prime = match e.cfg.model_spec()? {
        ModelSpec::Lbit(s) => s.xi,
        _ => unreachable!(),
    };
    let grids: Vec<&LightConeGrid> = e.reals.iter().filter_map(|r| r.commutator.as_ref()).collect();
    let c = e.comm.lbit_prefactor.unwrap_or(f64::NAN);
    let above = cells(&grids)
        .iter()
        .filter(|&&(t, r, v)| v > c * t * (-r / (2.0 * xi_prime)).exp() * (1.0 + 1e-12))
        .count();
    let half = grids.len() / 2;
    let c_train = fit_lbit_prefactor(&cells(&grids[..half]), xi_prime)?;
    let held = cells(&grids[half..]);
    let held_above =
        held.iter().filter(|&&(t, r, v)| v > c_train * t * (-r / (2.0 * xi_prime)).exp() * (1.0 + 1e-12)).count();
    let front = e.comm.fronts.first().and_then(|f| f.fit.as_ref());
    let log_selected = front.is_some_and(|f| f.selected == FrontModel::Logarithmic);
    let aic = front.map_or("no front fit".to_string(), |f| {
        format!("AIC linear {:.2}, log {:.2}", f.linear.aic, f.logarithmic.aic)
    });
    Ok((
        above == 0 && log_selected,
        format!(
            "prefactor {c:.3} leaves {above} of {} cells above c t exp(-r/(2xi')); theta=0.01 contour {aic}; \
             held-out: prefactor {c_train:.3} from realizations 0..{half} leaves {held_above} of {} later cells above",
            grids.len() * 12 * 8,
            held.len()
        ),
    ))
}

struct ErgodicReference {
    otoc: GridReport,
    entropy_fit: Option<llc_lab::probes::GrowthFit>,
    entropy_error: Option<String>,
}

/// Ergodic XXZ chain: OTOC front before it reaches the last probe, and
/// entanglement on `[1, 10]`.
fn ergodic_reference() -> llc_lab::Result<ErgodicReference> {
    let cfg = config(
        r#"
[run]
realizations = 4
[lattice]
size = 10
[model]
variant = "disordered-xxz"
seed = 2024
j = 1.0
jz = 1.0
disorder = 0.5
[time]
t_min = 0.25
t_max = 2.5
points = 10
spacing = "linear"
[probes]
distances = [1, 2, 3, 4, 5, 6, 7, 8]
thetas = [0.01]
"#,
    );
    let lattice = cfg.lattice.build()?;
    let otoc_times = cfg.time.grid()?;
    let entropy_times = time_grid(1.0, 10.0, 10, Spacing::Linear)?;
    let distances = cfg.probes.distances(&lattice);
    let cut = SiteSet::range(0, 5);
    let mut reals = Vec::new();
    let mut entropy = vec![0.0; entropy_times.len()];
    for k in 0..cfg.run.realizations {
        let seed = derive_seed(cfg.master_seed(), k as u64);
        let h = build_hamiltonian(cfg.model_spec()?, &lattice, seed)?;
        let prop = Propagator::new(&h)?;
        let comm = llc_lab::probes::commutator_grid_with(&prop, &lattice, 0, Pauli::Z, Pauli::Z, &otoc_times, &distances)?;
        let otoc = otoc_grid(&prop, &lattice, 0.0, 0, Pauli::Z, Pauli::Z, &otoc_times, &distances)?;
        let trace = entropy_trace_with(&prop, &h, &StateVector::neel(10), &entropy_times, &cut)?;
        for (acc, d) in entropy.iter_mut().zip(&trace.delta_bits) {
            *acc += d / cfg.run.realizations as f64;
        }
        reals.push(Realization { index: k, seed, commutator: Some(comm), otoc: Some(otoc), entropy: None, boundary_norm: 0.0 });
    }
    let (otoc, _) = grid_artifacts(&cfg, &reals, "otoc", |r| r.otoc.as_ref())?;
    let points: Vec<(f64, f64)> = entropy_times.iter().copied().zip(entropy).collect();
    let (entropy_fit, entropy_error) = match growth_fit(&points) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(ErgodicReference { otoc, entropy_fit, entropy_error })
}

fn v_b(report: &GridReport) -> Option<f64> {
    report.fronts.first()?.fit.as_ref().map(|f| f.v_b)
}

fn scrambling(e: &LbitEnsemble, erg: &ErgodicReference) -> Outcome {
    let excess = [e.otoc.max_otoc_excess, erg.otoc.max_otoc_excess].iter().map(|x| x.unwrap_or(f64::NAN)).fold(f64::MIN, f64::max);
    let (slow, fast) = (v_b(&e.otoc), v_b(&erg.otoc));
    let pass = excess <= 1e-9 && slow.is_some_and(|v| v <= 0.05) && fast.is_some_and(|v| v >= 0.2);
    let show = |v: Option<f64>| v.map_or("no front".into(), |v| format!("{v:.4}"));
    Ok((
        pass,
        format!(
            "max C - comm^2/2 = {excess:.1e}; l-bit v_B {} (need <= 0.05); ergodic v_B {} on t in [0.25, 2.5] (need >= 0.2)",
            show(slow),
            show(fast)
        ),
    ))
}

fn entropy_growth(e: &LbitEnsemble, erg: &ErgodicReference) -> Outcome {
    let (report, _) = entropy_artifacts(&e.cfg, &e.reals)?;
    let mut parts = Vec::new();
    let log_better = match &report.growth {
        Some(g) => {
            parts.push(format!("l-bit on [10, 1e3]: AIC linear {:.2}, log {:.2}", g.linear.aic, g.logarithmic.aic));
            g.selected == FrontModel::Logarithmic
        }
        None => {
            parts.push(format!("l-bit growth fit failed: {}", report.growth_error.clone().unwrap_or_default()));
            false
        }
    };
    let bounded = match &report.bound {
        Some(b) => {
            parts.push(format!(
                "bound with C1 = {:.3e} (trained on [10, 1e2]): {} training and {} held-out violations, cap binding at {} of {} points",
                b.inputs.c1,
                b.train.violations,
                b.held_out.violations,
                b.capped_points,
                b.train.slack.len() + b.held_out.slack.len()
            ));
            b.train.violations == 0 && b.held_out.violations == 0
        }
        None => {
            parts.push(format!("bound failed: {}", report.bound_error.clone().unwrap_or_default()));
            false
        }
    };
    let linear_better = match &erg.entropy_fit {
        Some(g) => {
            parts.push(format!("ergodic on [1, 10]: AIC linear {:.2}, log {:.2}", g.linear.aic, g.logarithmic.aic));
            g.selected == FrontModel::Linear
        }
        None => {
            parts.push(format!("ergodic growth fit failed: {}", erg.entropy_error.clone().unwrap_or_default()));
            false
        }
    };
    Ok((log_better && bounded && linear_better, parts.join("; ")))
}

fn decomposition() -> Outcome {
    let cfg = config(
        "[run]\nrealizations = 3\nseed = 2024\n[lattice]\nsize = 8\n[model]\nvariant = \"lbit\"\nseed = 2024\n\
         [lemmas]\nradii = [1, 2, 3]\nt = 10.0\n",
    );
    let (report, _) = decomposition_check(&cfg)?;
    let summary: DecompositionSummary = serde_json::from_value(report.details)?;
    let residuals: Vec<String> = summary
        .reports
        .iter()
        .map(|r| r.points.iter().map(|p| format!("{:.2e}", p.residual)).collect::<Vec<_>>().join("/"))
        .collect();
    let slopes: Vec<String> = summary.slopes.iter().map(|s| s.map_or("n/a".into(), |s| format!("{s:.2}"))).collect();
    Ok((
        report.violations == 0,
        format!(
            "{} realizations; residual at r=1/2/3: {}; {} increases; max residual/bound {:.2e}; ln-residual slopes {}",
            report.trials,
            residuals.join(", "),
            summary.monotonicity_violations,
            report.empirical_max,
            slopes.join(", ")
        ),
    ))
}

fn constant_deviation(scans: &[ScanResult]) -> f64 {
    let mut worst = 0.0f64;
    for s in scans {
        let mut first: std::collections::HashMap<&str, f64> = std::collections::HashMap::new();
        for row in &s.rows {
            let d0 = *first.entry(row.op_id.as_str()).or_insert(row.deviation);
            worst = worst.max((row.deviation - d0).abs());
        }
    }
    worst
}

fn memory() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, code) in [("repetition L=5", "{ kind = \"repetition\", length = 5 }"), ("toric 2x2", "{ kind = \"toric-2x2\" }")] {
        let perturbed = config(&format!("[run]\nseed = 2024\n[memory]\nseeds = 10\nstrength = 0.1\ncode = {code}\n"));
        let (scans, _) = memory_scans(&perturbed)?;
        let s = memory_summary(&perturbed, &scans);
        let ordered = s.ordering_holds == Some(true);
        let idle = config(&format!("[run]\nseed = 2024\n[memory]\nseeds = 2\nstrength = 0.0\ncode = {code}\n"));
        let drift = constant_deviation(&memory_scans(&idle)?.0);
        pass &= ordered && drift <= 1e-10;
        let below = s.ratios.iter().filter(|r| **r > 1.0).count();
        parts.push(format!(
            "{name}: lbit-like below ergodic at t=1e3 for {below}/{} seeds, median ratio {:.2} (>= 5: {}); s=0 drift {drift:.1e}",
            s.ratios.len(),
            s.ratio_at_tmax.unwrap_or(f64::NAN),
            s.ratio_at_tmax.is_some_and(|r| r >= 5.0)
        ));
    }
    Ok((pass, parts.join("; ")))
}

fn determinism() -> Outcome {
    let configs = [
        "[run]\nexperiment = \"lightcone\"\nrealizations = 4\n[lattice]\nsize = 6\n[model]\nvariant = \"lbit\"\nseed = 5\n\
         [time]\nt_max = 100.0\npoints = 8\n",
        "[run]\nexperiment = \"entropy\"\nrealizations = 4\n[lattice]\nsize = 6\n\
         [model]\nvariant = \"disordered-xxz\"\nseed = 5\nj = 1.0\njz = 1.0\ndisorder = 1.0\n",
        "[run]\nexperiment = \"memory\"\nseed = 5\n[time]\npoints = 6\n[memory]\nseeds = 3\n\
         code = { kind = \"repetition\", length = 3 }\n",
    ];
    let dir = tempfile::tempdir()?;
    let mut compared = 0;
    let mut differing = Vec::new();
    for (k, text) in configs.iter().enumerate() {
        let cfg = config(text);
        let outs: Vec<std::path::PathBuf> = [1, 8].iter().map(|w| dir.path().join(format!("{k}-{w}"))).collect();
        for (w, out) in [1, 8].iter().zip(&outs) {
            run(&cfg, &RunOptions { out: out.clone(), workers: *w })?;
        }
        for entry in std::fs::read_dir(&outs[0])? {
            let name = entry?.file_name();
            if Path::new(&name).extension().is_some_and(|e| e == "csv") {
                compared += 1;
                if std::fs::read(outs[0].join(&name))? != std::fs::read(outs[1].join(&name))? {
                    differing.push(name.to_string_lossy().into_owned());
                }
            }
        }
    }
    Ok((differing.is_empty() && compared > 0, format!("{compared} CSV files compared between 1 and 8 workers, {} differ {differing:?}", differing.len())))
}

fn report(k: usize, name: &str, start: Instant, outcome: Outcome, passed: &mut usize) {
    let (pass, detail) = outcome.unwrap_or_else(|e| panic!("criterion {k} ({name}) could not be evaluated: {e}"));
    *passed += pass as usize;
    println!("criterion {k} {name}: {} ({:.0}s) {detail}", verdict(pass), start.elapsed().as_secs_f64());
}

fn main() {
    faer::set_global_parallelism(faer::Par::Seq);
    let mut passed = 0;
    let t = Instant::now();
    report(1, "lambert-w", t, lambert(), &mut passed);
    let t = Instant::now();
    report(2, "small-total-entangling", t, ste(), &mut passed);
    let t = Instant::now();
    report(3, "small-incremental-entangling", t, sie(), &mut passed);

    let t = Instant::now();
    let cfg = config(LBIT);
    let probes = ProbeSet { commutator: true, otoc: true, entropy: true };
    let reals = with_workers(0, || simulate_ensemble(&cfg, probes)).and_then(|r| r).expect("l-bit ensemble");
    let (comm, _) = grid_artifacts(&cfg, &reals, "lightcone", |r| r.commutator.as_ref()).expect("light-cone summary");
    let (otoc, _) = grid_artifacts(&cfg, &reals, "otoc", |r| r.otoc.as_ref()).expect("OTOC summary");
    let ensemble = LbitEnsemble { cfg, reals, comm, otoc };
    let erg = ergodic_reference().expect("ergodic reference");
    println!("shared ensembles ready after {:.0}s", t.elapsed().as_secs_f64());
    let t = Instant::now();
    report(4, "logarithmic-light-cone", t, light_cone(&ensemble), &mut passed);
    report(5, "slow-scrambling", t, scrambling(&ensemble, &erg), &mut passed);
    report(6, "entanglement-growth", t, entropy_growth(&ensemble, &erg), &mut passed);

    let t = Instant::now();
    report(7, "boundary-decomposition", t, decomposition(), &mut passed);
    let t = Instant::now();
    report(8, "memory-lifetime", t, memory(), &mut passed);
    let t = Instant::now();
    report(9, "determinism", t, determinism(), &mut passed);

    println!("acceptance: {passed}/9 criteria PASS");
    if passed < 9 && std::env::var("LLC_LAB_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
