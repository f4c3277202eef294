//! Command-line front end: parses arguments, loads the configuration and
//! hands it to the harness.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use llc_lab::bounds::Theorem1Inputs;
use llc_lab::harness::{run, Experiment, LemmaKind, RunConfig, RunOptions};
use llc_lab::{Error, Result};

#[derive(Parser)]
#[command(name = "llc-lab", version, about = "Logarithmic light cones, scrambling, entanglement and memory experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML configuration, or a manifest.json from an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; overrides the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "LLC_LAB_WORKERS", default_value_t = 0)]
    workers: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Commutator norms on a time-distance grid.
    Lightcone(Common),
    /// Out-of-time-order correlators on a time-distance grid.
    Otoc(Common),
    /// Half-chain entanglement growth after a product-state quench.
    Entropy(Common),
    /// Entanglement bound evaluation and light-cone fits.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Randomized checks of the entangling and decomposition inequalities.
    #[command(subcommand)]
    Lemmas(LemmasCommand),
    /// Quantum memory lifetimes under perturbations.
    #[command(subcommand)]
    Memory(MemoryCommand),
    /// Checks a configuration and prints it with every default filled in.
    ValidateConfig(Common),
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Evaluates the entanglement bound on a time grid.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Bound inputs as JSON or TOML.
        #[arg(long)]
        params: PathBuf,
        /// Comma-separated times.
        #[arg(long, value_delimiter = ',')]
        t_grid: Vec<f64>,
    },
    /// Fits light-cone parameters to a light-cone CSV.
    Fit {
        #[command(flatten)]
        common: Common,
        /// Light-cone CSV with columns seed,realization,r,t,value.
        #[arg(long)]
        grid: PathBuf,
    },
}

#[derive(Subcommand)]
enum LemmasCommand {
    /// Checks entangling-rate, total-entangling or decomposition inequalities on random instances.
    Verify {
        #[command(flatten)]
        common: Common,
        /// One of sie, ste or decomposition.
        #[arg(long, value_parser = parse_lemma)]
        which: LemmaKind,
        /// Random trials; realizations for the decomposition check.
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Subcommand)]
enum MemoryCommand {
    /// Scans memory lifetimes of a perturbed stabilizer code.
    Scan(Common),
}

fn parse_lemma(s: &str) -> std::result::Result<LemmaKind, String> {
    match s {
        "sie" => Ok(LemmaKind::Sie),
        "ste" => Ok(LemmaKind::Ste),
        "decomposition" => Ok(LemmaKind::Decomposition),
        _ => Err(format!("unknown check '{s}', expected sie, ste or decomposition")),
    }
}

fn load(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.set_master_seed(seed);
    }
    Ok(cfg)
}

fn load_params(path: &Path) -> Result<Theorem1Inputs> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(|e| e.to_string())
    } else {
        toml::from_str(&text).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn execute(mut cfg: RunConfig, exp: Experiment, common: &Common) -> Result<()> {
    cfg.run.experiment = Some(exp);
    let out = common
        .out
        .clone()
        .or_else(|| cfg.run.out.clone())
        .unwrap_or_else(|| PathBuf::from("llc-lab-out").join(exp.name()));
    let manifest = run(&cfg, &RunOptions { out: out.clone(), workers: common.workers })?;
    for a in &manifest.artifacts {
        println!("{}", out.join(&a.path).display());
        if a.path.extension().is_some_and(|e| e == "json") && manifest.artifacts.len() <= 3 {
            print!("{}", std::fs::read_to_string(out.join(&a.path))?);
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Lightcone(c) => execute(load(&c)?, Experiment::Lightcone, &c),
        Command::Otoc(c) => execute(load(&c)?, Experiment::Otoc, &c),
        Command::Entropy(c) => execute(load(&c)?, Experiment::Entropy, &c),
        Command::Bounds(BoundsCommand::Eval { common, params, t_grid }) => {
            let mut cfg = load(&common)?;
            cfg.bounds.theorem1 = Some(load_params(&params)?);
            if t_grid.is_empty() {
                return Err(Error::Config("--t-grid needs at least one time".into()));
            }
            cfg.time.values = Some(t_grid);
            execute(cfg, Experiment::BoundsEval, &common)
        }
        Command::Bounds(BoundsCommand::Fit { common, grid }) => {
            let mut cfg = load(&common)?;
            cfg.bounds.grid = Some(grid);
            execute(cfg, Experiment::BoundsFit, &common)
        }
        Command::Lemmas(LemmasCommand::Verify { common, which, trials }) => {
            let mut cfg = load(&common)?;
            cfg.lemmas.which = vec![which];
            if let Some(n) = trials {
                if which == LemmaKind::Decomposition {
                    cfg.run.realizations = n;
                } else {
                    cfg.lemmas.trials = n;
                }
            }
            execute(cfg, Experiment::Lemmas, &common)
        }
        Command::Memory(MemoryCommand::Scan(c)) => execute(load(&c)?, Experiment::Memory, &c),
        Command::ValidateConfig(c) => {
            let cfg = load(&c)?;
            cfg.validate()?;
            print!("{}", cfg.to_toml_string()?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("llc-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
