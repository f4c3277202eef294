//! Experiment orchestration: configuration files, disorder ensembles,
//! artifacts and run manifests.

mod aggregate;
mod artifacts;
mod config;
mod manifest;
mod run;

pub use aggregate::{aggregate, GroupSummary, Welford};
pub use artifacts::{format_float, sha256_hex, write_artifact, Artifact, ArtifactRecord, Cell, CsvTable};
pub use config::{
    BoundsSection, EvolveSection, Experiment, InitialState, LatticeSection, LemmaKind, LemmasSection, MemorySection,
    ModelSection, ProbesSection, RunConfig, RunSection, TimeSection,
};
pub use manifest::{code_version, InputRecord, RunManifest, RunStatus, SeedRecord, MANIFEST_NAME};
pub use run::{
    bounds_fit_from_csv, decomposition_check, entropy_artifacts, grid_artifacts, lemma_check, mean_entropy_growth,
    memory_artifacts, memory_scans, memory_summary, realization_seeds, run, simulate_ensemble, summarize_grids,
    theorem1_artifact, with_workers, BoundsFitReport, DecompositionSummary, EntropyBoundReport, EntropyReport,
    FrontReport, GridReport, GridSummary, LemmaReport, MemorySummary, ProbeSet, Realization, RunOptions, OTOC_TOL,
};
