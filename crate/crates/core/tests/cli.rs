//! The command-line front end: artifacts, schemas, exit codes, manifests and
//! worker-count independence.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use llc_lab::harness::{CsvTable, RunManifest, RunStatus};
use serde_json::Value;

fn llc_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_llc-lab")).args(args).env_remove("LLC_LAB_WORKERS").output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const LIGHTCONE: &str = r#"
[run]
realizations = 3
[lattice]
size = 5
[model]
variant = "lbit"
seed = 9
[time]
t_min = 1.0
t_max = 100.0
points = 8
"#;

#[test]
fn lightcone_run_writes_schema_and_complete_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "lc.toml", LIGHTCONE);
    let out = dir.path().join("out");
    let o = llc_lab(&["lightcone", "--config", path(&cfg), "--out", path(&out), "--workers", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = CsvTable::load(&out.join("lightcone.csv")).unwrap();
    table.expect_header(&["seed", "realization", "r", "t", "value"]).unwrap();
    assert_eq!(table.len(), 3 * 4 * 8);
    CsvTable::load(&out.join("lightcone_contour.csv")).unwrap().expect_header(&["theta", "t", "r_theta"]).unwrap();
    let m = RunManifest::read(&out.join("manifest.json")).unwrap();
    assert_eq!(m.status, RunStatus::Complete);
    assert!(!m.partial);
    assert_eq!(m.master_seed, 9);
    assert_eq!(m.seeds.len(), 3);
    assert_eq!(m.config.time.points, 8);
    assert_eq!(m.config.evolve.krylov_dim, 30, "defaults are echoed");
    let csv = std::fs::read(out.join("lightcone.csv")).unwrap();
    let rec = m.artifacts.iter().find(|a| a.path == Path::new("lightcone.csv")).unwrap();
    assert_eq!(rec.sha256, llc_lab::harness::sha256_hex(&csv));
}

#[test]
fn worker_count_and_manifest_replay_leave_bytes_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "lc.toml", LIGHTCONE);
    let run = |name: &str, workers: &str, config: &Path| {
        let out = dir.path().join(name);
        let o = llc_lab(&["otoc", "--config", path(config), "--out", path(&out), "--workers", workers]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let one = run("w1", "1", &cfg);
    let many = run("w8", "8", &cfg);
    let replay = run("replay", "3", &one.join("manifest.json"));
    for f in ["otoc.csv", "otoc_summary.csv", "otoc_contour.csv", "otoc_fit.json"] {
        let a = std::fs::read(one.join(f)).unwrap();
        assert_eq!(a, std::fs::read(many.join(f)).unwrap(), "{f} depends on workers");
        assert_eq!(a, std::fs::read(replay.join(f)).unwrap(), "{f} differs on replay");
    }
}

#[test]
fn seed_flag_overrides_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "lc.toml", LIGHTCONE);
    let out = dir.path().join("out");
    assert!(llc_lab(&["lightcone", "--config", path(&cfg), "--seed", "77", "--out", path(&out)]).status.success());
    assert_eq!(RunManifest::read(&out.join("manifest.json")).unwrap().master_seed, 77);
}

#[test]
fn configuration_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("empty.toml", "[time]\nvalues = []\n"),
        ("points.toml", "[time]\npoints = 0\n"),
        ("dim.toml", "[lattice]\ndim = 3\n"),
        ("key.toml", "[lattice]\nsizee = 4\n"),
        ("syntax.toml", "[lattice\n"),
    ];
    for (name, text) in cases {
        let cfg = write(dir.path(), name, text);
        let o = llc_lab(&["validate-config", "--config", path(&cfg)]);
        assert_eq!(o.status.code(), Some(1), "{name}");
    }
    let cfg = write(dir.path(), "nomodel.toml", "[lattice]\nsize = 4\n");
    let out = dir.path().join("out");
    assert_eq!(llc_lab(&["lightcone", "--config", path(&cfg), "--out", path(&out)]).status.code(), Some(1));
    assert_eq!(llc_lab(&["lightcone"]).status.code(), Some(1), "missing config file");
    assert_eq!(llc_lab(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn validate_config_echoes_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "lc.toml", LIGHTCONE);
    let o = llc_lab(&["validate-config", "--config", path(&cfg)]);
    assert!(o.status.success());
    let echoed = llc_lab::harness::RunConfig::from_toml_str(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(echoed, llc_lab::harness::RunConfig::load(&cfg).unwrap());
}

#[test]
fn failed_run_leaves_partial_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write(dir.path(), "grid.csv", "t,r,value\n1,1,0.5\n");
    let out = dir.path().join("out");
    let o = llc_lab(&["bounds", "fit", "--grid", path(&grid), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(1));
    let m = RunManifest::read(&out.join("manifest.json")).unwrap();
    assert_eq!(m.status, RunStatus::Failed);
    assert!(m.partial);
    assert_eq!(m.exit_code, 1);
    assert!(m.error.unwrap().contains("header"));
}

#[test]
fn bounds_eval_and_fit_produce_documented_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let params = write(
        dir.path(),
        "p.json",
        r#"{"boundary": 2, "xi": 1, "alpha": 1, "c1": 0.01, "j": 1, "r_min": 1, "r_max": 8, "cap": null}"#,
    );
    let out = dir.path().join("eval");
    assert!(llc_lab(&["bounds", "eval", "--params", path(&params), "--t-grid", "1,10,100,1000", "--out", path(&out)]).status.success());
    let table = CsvTable::load(&out.join("theorem1.csv")).unwrap();
    table.expect_header(&["t", "bound", "r_star", "diag"]).unwrap();
    assert_eq!(table.len(), 4);

    let cfg = write(dir.path(), "lc.toml", LIGHTCONE);
    let lc = dir.path().join("lc");
    assert!(llc_lab(&["lightcone", "--config", path(&cfg), "--out", path(&lc)]).status.success());
    let fit_out = dir.path().join("fit");
    let grid = lc.join("lightcone.csv");
    assert!(llc_lab(&["bounds", "fit", "--grid", path(&grid), "--out", path(&fit_out)]).status.success());
    let v: Value = serde_json::from_slice(&std::fs::read(fit_out.join("bounds_fit.json")).unwrap()).unwrap();
    for key in ["C", "alpha", "xi", "stderr", "violations"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["violations"].as_f64(), Some(0.0));
    let m = RunManifest::read(&fit_out.join("manifest.json")).unwrap();
    assert_eq!(m.inputs.len(), 1, "the input grid is checksummed");
}

#[test]
fn lemma_verification_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    for which in ["sie", "ste"] {
        let out = dir.path().join(which);
        let o = llc_lab(&["lemmas", "verify", "--which", which, "--trials", "40", "--seed", "3", "--out", path(&out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v: Value = serde_json::from_slice(&std::fs::read(out.join(format!("lemma_{which}.json"))).unwrap()).unwrap();
        assert_eq!(v["trials"].as_u64(), Some(40));
        assert_eq!(v["max_violation"].as_f64(), Some(0.0));
        assert!(v["empirical_max"].as_f64().unwrap() > 0.0);
    }
    let o = llc_lab(&["lemmas", "verify", "--which", "nonsense", "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn memory_scan_writes_rows_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "mem.toml",
        "[time]\nt_min = 1.0\nt_max = 100.0\npoints = 4\n[memory]\nseeds = 2\ncode = { kind = \"repetition\", length = 3 }\n",
    );
    let out = dir.path().join("mem");
    let o = llc_lab(&["memory", "scan", "--config", path(&cfg), "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = CsvTable::load(&out.join("memory.csv")).unwrap();
    table.expect_header(&["seed", "variant", "op_id", "t", "deviation", "z_star"]).unwrap();
    let v: Value = serde_json::from_slice(&std::fs::read(out.join("memory_summary.json")).unwrap()).unwrap();
    assert_eq!(v["t_est"]["lbit-like"].as_array().unwrap().len(), 2);
    assert!(v.get("ratio_at_tmax").is_some());
}

#[test]
fn worker_count_can_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "lc.toml", LIGHTCONE);
    let out = dir.path().join("env");
    let o = Command::new(env!("CARGO_BIN_EXE_llc-lab"))
        .args(["lightcone", "--config", path(&cfg), "--out", path(&out)])
        .env("LLC_LAB_WORKERS", "3")
        .output()
        .unwrap();
    assert!(o.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_llc-lab"))
        .args(["lightcone", "--config", path(&cfg), "--out", path(&out)])
        .env("LLC_LAB_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
