//! Drive the harness from a TOML string: a small disorder ensemble, its
//! artifacts and the manifest that records seeds and checksums.

use llc_lab::harness::{run, RunConfig, RunOptions};

const CONFIG: &str = r#"
[run]
experiment = "entropy"
realizations = 4

[lattice]
size = 6

[model]
variant = "lbit"
seed = 42
angle = 1.5
range = 6

[time]
t_min = 1.0
t_max = 1000.0
points = 12
"#;

fn main() -> llc_lab::Result<()> {
    let cfg = RunConfig::from_toml_str(CONFIG)?;
    let out = std::env::temp_dir().join("llc-lab-ensemble-example");
    let manifest = run(&cfg, &RunOptions { out: out.clone(), workers: 2 })?;
    println!("{} in {:.2}s, master seed {}", manifest.experiment, manifest.wall_clock_seconds, manifest.master_seed);
    for s in &manifest.seeds {
        println!("  realization {} seed {}", s.index, s.seed);
    }
    for a in &manifest.artifacts {
        println!("  {} ({} bytes, sha256 {})", out.join(&a.path).display(), a.bytes, &a.sha256[..16]);
    }
    Ok(())
}
