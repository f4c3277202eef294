//! Run configuration: one TOML file with a section per module.
//!
//! Every field has an explicit default so the manifest can echo the complete
//! configuration that produced a run.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::Theorem1Inputs;
use crate::error::{Error, Result};
use crate::evolve::{time_grid, Engine, Spacing};
use crate::lattice::{Boundary, Lattice, SiteSet};
use crate::lemmas::STE_MAX_QUBITS;
use crate::memory::{CodeKind, PerturbationKind};
use crate::models::{LbitSpec, ModelSpec};
use crate::operators::{Pauli, StateVector};

/// Experiment selected by the command-line subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Lightcone,
    Otoc,
    Entropy,
    BoundsEval,
    BoundsFit,
    Lemmas,
    Memory,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Lightcone => "lightcone",
            Experiment::Otoc => "otoc",
            Experiment::Entropy => "entropy",
            Experiment::BoundsEval => "bounds-eval",
            Experiment::BoundsFit => "bounds-fit",
            Experiment::Lemmas => "lemmas",
            Experiment::Memory => "memory",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub experiment: Option<Experiment>,
    /// Disorder realizations in the ensemble.
    pub realizations: usize,
    /// Master seed for experiments without a `[model]` section.
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection { experiment: None, realizations: 1, seed: 0, out: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LatticeSection {
    pub dim: usize,
    pub size: usize,
    pub boundary: Boundary,
}

impl Default for LatticeSection {
    fn default() -> Self {
        LatticeSection { dim: 1, size: 8, boundary: Boundary::Open }
    }
}

impl LatticeSection {
    pub fn build(&self) -> Result<Lattice> {
        let lattice = Lattice::new(self.dim, self.size, self.boundary)?;
        if lattice.num_sites() > crate::MAX_DENSE_SITES {
            return Err(Error::Config(format!(
                "lattice has {} sites, more than the dense limit {}",
                lattice.num_sites(),
                crate::MAX_DENSE_SITES
            )));
        }
        Ok(lattice)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSection {
    /// Master seed; realization `k` uses the `k`-th derived stream.
    #[serde(default)]
    pub seed: u64,
    #[serde(flatten)]
    pub spec: ModelSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeSection {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub spacing: Spacing,
    /// Explicit times; replaces the generated grid when present.
    pub values: Option<Vec<f64>>,
}

impl Default for TimeSection {
    fn default() -> Self {
        TimeSection { t_min: 1.0, t_max: 1e3, points: 12, spacing: Spacing::Log, values: None }
    }
}

impl TimeSection {
    pub fn grid(&self) -> Result<Vec<f64>> {
        match &self.values {
            Some(v) if v.is_empty() => Err(Error::Config("time.values is empty".into())),
            Some(v) if v.iter().any(|t| !(t.is_finite() && *t >= 0.0)) => {
                Err(Error::Config("time.values must be finite and non-negative".into()))
            }
            Some(v) => Ok(v.clone()),
            None => time_grid(self.t_min, self.t_max, self.points, self.spacing),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    /// `|0101...>`.
    Neel,
    /// `|00...0>`.
    AllUp,
}

impl InitialState {
    pub fn build(self, num_sites: usize) -> StateVector {
        match self {
            InitialState::Neel => StateVector::neel(num_sites),
            InitialState::AllUp => StateVector::basis(num_sites, 0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbesSection {
    pub origin: usize,
    /// Probe distances; empty means `1..=r_max`.
    pub distances: Vec<usize>,
    /// Largest distance when `distances` is empty; 0 means the lattice diameter.
    pub r_max: usize,
    pub x: Pauli,
    pub y: Pauli,
    pub thetas: Vec<f64>,
    /// Inverse temperature of the OTOC.
    pub beta: f64,
    /// Sites `0..cut` form side `A`; 0 means half the register.
    pub cut: usize,
    pub initial_state: InitialState,
}

impl Default for ProbesSection {
    fn default() -> Self {
        ProbesSection {
            origin: 0,
            distances: Vec::new(),
            r_max: 0,
            x: Pauli::Z,
            y: Pauli::Z,
            thetas: vec![0.01],
            beta: 0.0,
            cut: 0,
            initial_state: InitialState::Neel,
        }
    }
}

impl ProbesSection {
    pub fn distances(&self, lattice: &Lattice) -> Vec<usize> {
        if !self.distances.is_empty() {
            return self.distances.clone();
        }
        let r_max = if self.r_max == 0 { lattice.diameter() } else { self.r_max };
        (1..=r_max).collect()
    }

    pub fn cut_side(&self, num_sites: usize) -> SiteSet {
        SiteSet::range(0, if self.cut == 0 { num_sites / 2 } else { self.cut })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveSection {
    pub engine: Engine,
    pub krylov_dim: usize,
}

impl Default for EvolveSection {
    fn default() -> Self {
        EvolveSection { engine: Engine::Exact, krylov_dim: 30 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsSection {
    /// Light-cone exponent `alpha` of the entanglement bound.
    pub alpha: f64,
    /// Light-cone length `xi`; 0 means `2 xi'` of an l-bit model.
    pub xi: f64,
    pub r_min: f64,
    /// Largest radius of the optimization window; 0 means the smaller side of the cut.
    pub r_max: f64,
    /// Times fitted by the entropy growth models.
    pub fit_window: [f64; 2],
    /// Times used to fit the bound constant; later times validate it.
    pub train_window: [f64; 2],
    /// Inputs for `bounds eval`.
    pub theorem1: Option<Theorem1Inputs>,
    /// Light-cone CSV for `bounds fit`.
    pub grid: Option<PathBuf>,
}

impl Default for BoundsSection {
    fn default() -> Self {
        BoundsSection {
            alpha: 1.0,
            xi: 0.0,
            r_min: 1.0,
            r_max: 0.0,
            fit_window: [10.0, 1e3],
            train_window: [10.0, 1e2],
            theorem1: None,
            grid: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaKind {
    Sie,
    Ste,
    Decomposition,
}

impl LemmaKind {
    pub fn name(self) -> &'static str {
        match self {
            LemmaKind::Sie => "sie",
            LemmaKind::Ste => "ste",
            LemmaKind::Decomposition => "decomposition",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LemmasSection {
    pub which: Vec<LemmaKind>,
    pub trials: usize,
    /// `(a, b)` register sizes of the total-entangling check.
    pub ste_sizes: Vec<[usize; 2]>,
    /// Ribbon radii of the decomposition check.
    pub radii: Vec<usize>,
    /// Time of the decomposition check.
    pub t: f64,
}

impl Default for LemmasSection {
    fn default() -> Self {
        LemmasSection {
            which: vec![LemmaKind::Sie, LemmaKind::Ste, LemmaKind::Decomposition],
            trials: 1000,
            ste_sizes: vec![[1, 1], [2, 2]],
            radii: vec![1, 2, 3],
            t: 10.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MemorySection {
    pub code: CodeKind,
    pub gap: f64,
    pub strength: f64,
    pub variants: Vec<PerturbationKind>,
    /// Disorder seeds per variant.
    pub seeds: usize,
    /// Deviation level that ends the lifetime.
    pub threshold: f64,
    pub dressing: LbitSpec,
}

impl Default for MemorySection {
    fn default() -> Self {
        MemorySection {
            code: CodeKind::Repetition { length: 5 },
            gap: 1.0,
            strength: 0.1,
            variants: vec![PerturbationKind::LbitLike, PerturbationKind::Ergodic],
            seeds: 10,
            threshold: 0.1,
            dressing: LbitSpec::perturbation_default(),
        }
    }
}

/// Complete description of one run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub run: RunSection,
    pub lattice: LatticeSection,
    pub model: Option<ModelSection>,
    pub time: TimeSection,
    pub probes: ProbesSection,
    pub evolve: EvolveSection,
    pub bounds: BoundsSection,
    pub lemmas: LemmasSection,
    pub memory: MemorySection,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a TOML config, or the config echoed in a JSON run manifest.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            let manifest: super::RunManifest =
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            return Ok(manifest.config);
        }
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// `model.seed` when a model is configured, `run.seed` otherwise.
    pub fn master_seed(&self) -> u64 {
        self.model.as_ref().map_or(self.run.seed, |m| m.seed)
    }

    pub fn set_master_seed(&mut self, seed: u64) {
        self.run.seed = seed;
        if let Some(m) = &mut self.model {
            m.seed = seed;
        }
    }

    pub fn model_spec(&self) -> Result<&ModelSpec> {
        self.model.as_ref().map(|m| &m.spec).ok_or_else(|| Error::Config("a [model] section is required".into()))
    }

    /// Checks everything the selected experiment will use before any compute.
    pub fn validate(&self) -> Result<()> {
        let lattice = self.lattice.build()?;
        if self.run.realizations == 0 {
            return Err(Error::Config("run.realizations must be at least 1".into()));
        }
        if let Some(m) = &self.model {
            m.spec.validate()?;
        }
        let needs_model = matches!(
            self.run.experiment,
            Some(Experiment::Lightcone | Experiment::Otoc | Experiment::Entropy)
        );
        if needs_model {
            self.model_spec()?;
        }
        let needs_time = !matches!(self.run.experiment, Some(Experiment::BoundsFit | Experiment::Lemmas));
        if needs_time {
            self.time.grid()?;
        }
        self.validate_probes(&lattice)?;
        if self.evolve.krylov_dim < 2 {
            return Err(Error::Config("evolve.krylov_dim must be at least 2".into()));
        }
        self.validate_bounds()?;
        self.validate_lemmas()?;
        self.validate_memory()
    }

    fn validate_probes(&self, lattice: &Lattice) -> Result<()> {
        let p = &self.probes;
        let n = lattice.num_sites();
        if p.origin >= n {
            return Err(Error::Config(format!("probes.origin {} outside {n} sites", p.origin)));
        }
        if let Some(&r) = p.distances(lattice).iter().find(|&&r| r == 0 || r > lattice.diameter()) {
            return Err(Error::Config(format!("probe distance {r} must lie in 1..={}", lattice.diameter())));
        }
        if p.thetas.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::Config("probes.thetas must be positive".into()));
        }
        if !(p.beta.is_finite() && p.beta >= 0.0) {
            return Err(Error::Config("probes.beta must be finite and non-negative".into()));
        }
        let a = p.cut_side(n).len();
        if a == 0 || a >= n {
            return Err(Error::Config(format!("probes.cut must leave both sides non-empty, got {a} of {n}")));
        }
        Ok(())
    }

    fn validate_bounds(&self) -> Result<()> {
        let b = &self.bounds;
        if !(b.alpha.is_finite() && b.alpha > 0.0) {
            return Err(Error::Config("bounds.alpha must be positive".into()));
        }
        if !(b.xi.is_finite() && b.xi >= 0.0) || !(b.r_max.is_finite() && b.r_max >= 0.0) || !(b.r_min >= 1.0) {
            return Err(Error::Config("bounds.xi and bounds.r_max must be non-negative and bounds.r_min >= 1".into()));
        }
        for (name, w) in [("fit_window", b.fit_window), ("train_window", b.train_window)] {
            if !(w[0] > 0.0 && w[1] >= w[0] && w[1].is_finite()) {
                return Err(Error::Config(format!("bounds.{name} must satisfy 0 < start <= end")));
            }
        }
        if let Some(t) = &b.theorem1 {
            t.validate()?;
        }
        match self.run.experiment {
            Some(Experiment::BoundsEval) if b.theorem1.is_none() => {
                Err(Error::Config("bounds eval needs [bounds.theorem1] or --params".into()))
            }
            Some(Experiment::BoundsFit) if b.grid.is_none() => {
                Err(Error::Config("bounds fit needs bounds.grid or --grid".into()))
            }
            _ => Ok(()),
        }
    }

    fn validate_lemmas(&self) -> Result<()> {
        let l = &self.lemmas;
        if l.trials == 0 {
            return Err(Error::Config("lemmas.trials must be at least 1".into()));
        }
        if let Some([a, b]) = l.ste_sizes.iter().find(|[a, b]| *a == 0 || *b == 0 || 2 * (a + b) > STE_MAX_QUBITS) {
            return Err(Error::Config(format!("lemmas.ste_sizes entry [{a}, {b}] is empty or too large")));
        }
        if !(l.t.is_finite() && l.t >= 0.0) {
            return Err(Error::Config("lemmas.t must be non-negative".into()));
        }
        Ok(())
    }

    fn validate_memory(&self) -> Result<()> {
        let m = &self.memory;
        for (name, v) in [("gap", m.gap), ("strength", m.strength)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Config(format!("memory.{name} must be finite and non-negative")));
            }
        }
        if !(m.threshold.is_finite() && m.threshold > 0.0) {
            return Err(Error::Config("memory.threshold must be positive".into()));
        }
        if m.seeds == 0 || m.variants.is_empty() {
            return Err(Error::Config("memory needs at least one seed and one variant".into()));
        }
        m.dressing.validate()
    }
}
