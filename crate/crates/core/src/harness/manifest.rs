//! Run manifests: what was run, from which seeds, and what it produced.

use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::artifacts::{sha256_hex, ArtifactRecord};
use super::config::RunConfig;
use crate::error::{Error, Result};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Running,
    Complete,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedRecord {
    /// Realization, trial block or memory seed index.
    pub index: usize,
    pub seed: u64,
}

/// Input file read by the run, with its checksum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub code_version: String,
    pub status: RunStatus,
    /// Artifacts of a failed run are incomplete.
    pub partial: bool,
    pub exit_code: i32,
    pub error: Option<String>,
    pub master_seed: u64,
    pub seeds: Vec<SeedRecord>,
    pub inputs: Vec<InputRecord>,
    pub artifacts: Vec<ArtifactRecord>,
    pub started_unix_seconds: f64,
    pub wall_clock_seconds: f64,
    /// Complete configuration, defaults included.
    pub config: RunConfig,
    #[serde(skip)]
    clock: Option<Instant>,
}

pub fn code_version() -> String {
    format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))
}

impl RunManifest {
    pub fn start(experiment: &str, config: &RunConfig) -> Self {
        let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64());
        RunManifest {
            experiment: experiment.to_string(),
            code_version: code_version(),
            status: RunStatus::Running,
            partial: false,
            exit_code: 0,
            error: None,
            master_seed: config.master_seed(),
            seeds: Vec::new(),
            inputs: Vec::new(),
            artifacts: Vec::new(),
            started_unix_seconds: started,
            wall_clock_seconds: 0.0,
            config: config.clone(),
            clock: Some(Instant::now()),
        }
    }

    pub fn record_input(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(InputRecord { path: path.display().to_string(), sha256: sha256_hex(&bytes) });
        Ok(())
    }

    fn stop_clock(&mut self) {
        if let Some(c) = self.clock {
            self.wall_clock_seconds = c.elapsed().as_secs_f64();
        }
    }

    pub fn complete(&mut self) {
        self.stop_clock();
        self.status = RunStatus::Complete;
    }

    pub fn fail(&mut self, err: &Error) {
        self.stop_clock();
        self.status = RunStatus::Failed;
        self.partial = true;
        self.exit_code = err.exit_code();
        self.error = Some(err.to_string());
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        std::fs::write(dir.join(MANIFEST_NAME), bytes)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}
