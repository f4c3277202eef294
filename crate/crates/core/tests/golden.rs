//! Entropy traces of a fixed disorder ensemble, pinned to stored values.
//!
//! The stored table was produced by `llc-lab entropy` on
//! `tests/data/golden_entropy.toml`. Any change beyond `1e-10` bits means the
//! model, the seeding or the evolution changed.

use std::path::Path;

use llc_lab::harness::{entropy_artifacts, simulate_ensemble, with_workers, CsvTable, ProbeSet, RunConfig};

#[test]
fn entropy_trace_matches_stored_values() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let cfg = RunConfig::load(&data.join("golden_entropy.toml")).unwrap();
    let reals =
        with_workers(2, || simulate_ensemble(&cfg, ProbeSet { entropy: true, ..ProbeSet::default() })).unwrap().unwrap();
    let (_, artifacts) = entropy_artifacts(&cfg, &reals).unwrap();
    let fresh = CsvTable::parse(artifacts.iter().find(|a| a.name == "entropy.csv").unwrap().text()).unwrap();
    let stored = CsvTable::load(&data.join("golden_entropy.csv")).unwrap();
    assert_eq!(fresh.header, stored.header);
    assert_eq!(fresh.len(), stored.len());
    for row in 0..stored.len() {
        assert_eq!(fresh.rows[row][..3], stored.rows[row][..3], "seed, realization and time");
        let (a, b) = (fresh.number(row, 3).unwrap(), stored.number(row, 3).unwrap());
        assert!((a - b).abs() <= 1e-10, "row {row}: {a} vs {b}");
    }
}
