//! TOML experiment configuration.
//!
//! ```toml
//! [experiment]
//! seed = 42
//! output_dir = "results"
//! strategies = ["degree", "betweenness", "bfg", "pbo"]
//! k_grid = ["10%", "20%", "30%"]
//! failure_ratios = [0.0, 0.1, 0.2, 0.3]
//!
//! [solver]
//! tol = 1e-10
//!
//! [dynamics]
//! c = 5.0
//!
//! [[network]]
//! model = "er"
//! n = 1000
//! er_p = 0.1
//!
//! [[network]]
//! name = "celegans"
//! path = "data/celegans.edges"
//! ```
//!
//! Relative network paths are resolved against the config file's directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::DynamicsConfig;
use crate::error::{Error, Result};
use crate::generators::{GenSpec, Model};
use crate::graph::{load_edge_list_file, Graph};
use crate::rng::derive_seed;
use crate::spectral::SolverOptions;
use crate::strategies::{Budget, SelectOptions, StrategyKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    /// Root of every seed stream.
    pub seed: u64,
    pub output_dir: PathBuf,
    pub strategies: Vec<StrategyKind>,
    /// Budgets for curves, robustness and simulation; empty means 30 evenly
    /// spaced points up to 30% of the node count.
    pub k_grid: Vec<Budget>,
    pub failure_ratios: Vec<f64>,
    /// Failure draws per (k, ratio).
    pub trials: usize,
    /// Trajectories per (strategy, k, ratio).
    pub sim_trials: usize,
    /// Budget for the timing benchmark.
    pub bench_k: Budget,
    pub bfg_pruning: bool,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            seed: 0,
            output_dir: PathBuf::from("results"),
            strategies: StrategyKind::ALL.to_vec(),
            k_grid: Vec::new(),
            failure_ratios: vec![0.0, 0.1, 0.2, 0.3],
            trials: 30,
            sim_trials: 10,
            bench_k: Budget::Fraction(0.1),
            bfg_pruning: false,
        }
    }
}

/// One `[[network]]` table: either a generator or an edge-list file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkEntry {
    pub name: Option<String>,
    pub path: Option<PathBuf>,
    pub model: Option<Model>,
    pub n: Option<usize>,
    pub ba_m: Option<usize>,
    pub er_p: Option<f64>,
    pub ws_k: Option<usize>,
    pub ws_p: Option<f64>,
    /// Defaults to a stream of the experiment seed.
    pub seed: Option<u64>,
    /// Redraw ER/WS graphs until connected; on by default.
    pub require_connected: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NetworkSource {
    Generated { name: String, spec: GenSpec },
    File { name: String, path: PathBuf },
}

impl NetworkSource {
    pub fn name(&self) -> &str {
        match self {
            NetworkSource::Generated { name, .. } | NetworkSource::File { name, .. } => name,
        }
    }

    pub fn load(&self) -> Result<Graph> {
        match self {
            NetworkSource::Generated { spec, .. } => spec.generate(),
            NetworkSource::File { name, path } => {
                check_readable(name, path)?;
                Ok(load_edge_list_file(path)?.0)
            }
        }
    }
}

pub(crate) fn check_readable(name: &str, path: &Path) -> Result<()> {
    std::fs::File::open(path).map(drop).map_err(|source| Error::MissingDataset {
        name: name.to_owned(),
        path: path.to_owned(),
        source,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    pub solver: SolverOptions,
    pub dynamics: DynamicsConfig,
    #[serde(rename = "network")]
    pub networks: Vec<NetworkEntry>,
    #[serde(skip)]
    base_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        for source in cfg.sources()? {
            if let NetworkSource::File { name, path } = &source {
                check_readable(name, path)?;
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let e = &self.experiment;
        if e.strategies.is_empty() {
            return Err(Error::Config("no strategies listed".into()));
        }
        if e.trials == 0 || e.sim_trials == 0 {
            return Err(Error::Config("trials and sim_trials must be at least 1".into()));
        }
        if let Some(r) = e.failure_ratios.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return Err(Error::Config(format!("failure ratio {r} outside [0, 1]")));
        }
        self.dynamics.validate()?;
        if !(self.solver.tol > 0.0) {
            return Err(Error::Config(format!("solver tol must be positive, got {}", self.solver.tol)));
        }
        Ok(())
    }

    pub fn select_options(&self) -> SelectOptions {
        SelectOptions { solver: self.solver, bfg_pruning: self.experiment.bfg_pruning }
    }

    /// Resolved networks in file order.
    pub fn sources(&self) -> Result<Vec<NetworkSource>> {
        self.networks.iter().enumerate().map(|(i, entry)| self.resolve(i, entry)).collect()
    }

    fn resolve(&self, index: usize, e: &NetworkEntry) -> Result<NetworkSource> {
        match (&e.path, e.model) {
            (Some(path), None) => {
                let path = if path.is_relative() { self.base_dir.join(path) } else { path.clone() };
                let name = e.name.clone().unwrap_or_else(|| {
                    path.file_stem().map_or_else(|| format!("network{index}"), |s| s.to_string_lossy().into_owned())
                });
                Ok(NetworkSource::File { name, path })
            }
            (None, Some(model)) => {
                let n = e.n.ok_or_else(|| Error::Config(format!("network {index}: generator needs n")))?;
                let seed = e.seed.unwrap_or_else(|| derive_seed(self.experiment.seed, "generator", &[index as u64]));
                let mut spec = match model {
                    Model::Ba => GenSpec::ba(n, e.ba_m.unwrap_or(3), seed),
                    Model::Er => GenSpec::er(n, e.er_p.unwrap_or(0.1), seed),
                    Model::Ws => GenSpec::ws(n, e.ws_k.unwrap_or(10), e.ws_p.unwrap_or(0.1), seed),
                };
                spec = spec.connected(e.require_connected.unwrap_or(true));
                spec.validate()?;
                let name = e.name.clone().unwrap_or_else(|| spec.name());
                Ok(NetworkSource::Generated { name, spec })
            }
            _ => Err(Error::Config(format!("network {index}: give exactly one of `path` or `model`"))),
        }
    }

    pub fn with_base_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.base_dir = dir.into();
        self
    }
}

/// Absolute budgets for a graph of `n` nodes, ascending and deduplicated.
pub fn resolve_k_grid(grid: &[Budget], n: usize) -> Result<Vec<usize>> {
    let mut ks: Vec<usize> = if grid.is_empty() {
        (1..=30)
            .map(|j| (0.3 * n as f64 * j as f64 / 30.0 + 0.5).floor() as usize)
            .filter(|&k| k >= 1 && k < n)
            .collect()
    } else {
        grid.iter().map(|b| b.resolve(n)).collect::<Result<_>>()?
    };
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() {
        return Err(Error::Config(format!("k grid is empty for N={n}")));
    }
    Ok(ks)
}
