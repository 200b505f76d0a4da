use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::bench::{write_timing, TimingRecord};
use super::config::{check_readable, resolve_k_grid, ExperimentConfig, NetworkSource};
use super::output::{fmt_f64, fmt_sync_time, robustness_rows, slug, write_trace, CsvSink, ROBUSTNESS_HEADER};
use crate::dynamics::{simulate, DynamicsConfig, TrajectorySummary};
use crate::error::Result;
use crate::graph::{load_edge_list_file, write_edge_list, Graph, LoadReport};
use crate::rng::derive_seed;
use crate::robustness::{apply_failures, effective_lambda1, robustness_from_trace, RobustnessCurve};
use crate::strategies::{select, SelectOptions, SelectionTrace, StrategyKind};

/// One network with a full-length trace per strategy.
#[derive(Debug, Clone)]
pub struct NetworkRun {
    pub name: String,
    pub graph: Graph,
    pub k_grid: Vec<usize>,
    pub traces: Vec<SelectionTrace>,
}

impl NetworkRun {
    pub fn trace(&self, strategy: StrategyKind) -> Option<&SelectionTrace> {
        self.traces.iter().find(|t| t.strategy == strategy)
    }
}

fn run_network(name: String, graph: Graph, cfg: &ExperimentConfig) -> Result<NetworkRun> {
    let k_grid = resolve_k_grid(&cfg.experiment.k_grid, graph.node_count())?;
    let k_max = *k_grid.last().expect("grid is nonempty");
    let opts = cfg.select_options();
    let traces =
        cfg.experiment.strategies.par_iter().map(|&s| select(&graph, s, k_max, &opts)).collect::<Result<Vec<_>>>()?;
    Ok(NetworkRun { name, graph, k_grid, traces })
}

fn out_path(cfg: &ExperimentConfig, stem: &str, network: &str) -> PathBuf {
    cfg.experiment.output_dir.join(format!("{stem}_{}.csv", slug(network)))
}

pub const CURVE_HEADER: [&str; 4] = ["network", "strategy", "k", "lambda1"];

fn write_curve(path: &Path, run: &NetworkRun) -> Result<PathBuf> {
    let mut sink = CsvSink::create(path, &CURVE_HEADER)?;
    for trace in &run.traces {
        for &k in &run.k_grid {
            sink.row([
                run.name.clone(),
                trace.strategy.name().to_owned(),
                k.to_string(),
                fmt_f64(trace.steps[k - 1].lambda1),
            ])?;
        }
    }
    sink.finish()
}

#[derive(Debug, Clone)]
pub struct CurveReport {
    pub networks: Vec<NetworkRun>,
    pub timings: Vec<TimingRecord>,
    pub files: Vec<PathBuf>,
}

/// `lambda1` against `k` for every network and strategy, plus selection times.
pub fn run_curve_experiment(cfg: &ExperimentConfig) -> Result<CurveReport> {
    let mut networks = Vec::new();
    let mut timings = Vec::new();
    let mut files = Vec::new();
    for source in cfg.sources()? {
        let run = run_network(source.name().to_owned(), source.load()?, cfg)?;
        for trace in &run.traces {
            let stem = format!("trace_{}", trace.strategy);
            files.push(write_trace(out_path(cfg, &stem, &run.name), &run.graph, trace)?);
            timings.push(TimingRecord::from_trace(&run.graph, trace));
        }
        files.push(write_curve(&out_path(cfg, "curve", &run.name), &run)?);
        networks.push(run);
    }
    files.push(write_timing(cfg.experiment.output_dir.join("timing.csv"), &timings)?);
    Ok(CurveReport { networks, timings, files })
}

#[derive(Debug, Clone)]
pub struct RobustnessReport {
    pub networks: Vec<(NetworkRun, Vec<RobustnessCurve>)>,
    pub files: Vec<PathBuf>,
}

fn robustness_for(run: &NetworkRun, index: usize, cfg: &ExperimentConfig) -> Result<Vec<RobustnessCurve>> {
    let e = &cfg.experiment;
    let seed = derive_seed(e.seed, "failures", &[index as u64]);
    run.traces
        .iter()
        .map(|t| robustness_from_trace(&run.graph, t, &run.k_grid, &e.failure_ratios, e.trials, seed, &cfg.solver))
        .collect()
}

fn write_robustness(path: &Path, curves: &[RobustnessCurve]) -> Result<PathBuf> {
    let mut sink = CsvSink::create(path, &ROBUSTNESS_HEADER)?;
    for curve in curves {
        for row in robustness_rows(curve) {
            sink.row(row)?;
        }
    }
    sink.finish()
}

/// Mean and spread of effective `lambda1` under random pin failures.
pub fn run_robustness_experiment(cfg: &ExperimentConfig) -> Result<RobustnessReport> {
    let mut networks = Vec::new();
    let mut files = Vec::new();
    for (i, source) in cfg.sources()?.into_iter().enumerate() {
        let run = run_network(source.name().to_owned(), source.load()?, cfg)?;
        let curves = robustness_for(&run, i, cfg)?;
        files.push(write_robustness(&out_path(cfg, "robustness", &run.name), &curves)?);
        networks.push((run, curves));
    }
    Ok(RobustnessReport { networks, files })
}

#[derive(Debug, Clone)]
pub struct SimulationRow {
    pub strategy: StrategyKind,
    pub k: usize,
    pub seed: u64,
    pub failure_ratio: f64,
    pub summary: TrajectorySummary,
    /// Effective `lambda1` of the surviving pins.
    pub lambda1: f64,
}

pub const SIMULATION_HEADER: [&str; 7] =
    ["strategy", "k", "seed", "failure_ratio", "sync_time", "final_error", "lambda1"];

/// Trajectories for every strategy, budget, failure ratio and trial.
///
/// Trial `t` starts from the initial conditions of seed `base + t`, where
/// `base` depends only on the root seed and the network, so all strategies
/// face the same starts.
#[allow(clippy::too_many_arguments)]
pub fn simulate_network(
    graph: &Graph,
    traces: &[SelectionTrace],
    k_grid: &[usize],
    ratios: &[f64],
    trials: usize,
    dynamics: &DynamicsConfig,
    root_seed: u64,
    network_index: usize,
    opts: &SelectOptions,
) -> Result<Vec<SimulationRow>> {
    let base = derive_seed(root_seed, "initial-conditions", &[network_index as u64]);
    let mut cells = Vec::new();
    for trace in traces {
        for &k in k_grid {
            for &ratio in ratios {
                for t in 0..trials {
                    cells.push((trace, k, ratio, t));
                }
            }
        }
    }
    cells
        .into_par_iter()
        .map(|(trace, k, ratio, t)| {
            let pins = trace.prefix(k).pins();
            let mask_seed = derive_seed(root_seed, "sim-failures", &[network_index as u64, k as u64, t as u64]);
            let mask = apply_failures(&pins, ratio, mask_seed)?;
            let seed = base.wrapping_add(t as u64);
            let cfg = DynamicsConfig { seed, ..dynamics.clone() };
            let summary = simulate(graph, &pins, &cfg, &mask)?;
            let lambda1 = effective_lambda1(graph, &pins, &mask, &opts.solver)?;
            Ok(SimulationRow { strategy: trace.strategy, k, seed, failure_ratio: ratio, summary, lambda1 })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub networks: Vec<(NetworkRun, Vec<SimulationRow>)>,
    pub files: Vec<PathBuf>,
}

pub fn run_simulation_experiment(cfg: &ExperimentConfig) -> Result<SimulationReport> {
    let e = &cfg.experiment;
    let ratios = if e.failure_ratios.is_empty() { vec![0.0] } else { e.failure_ratios.clone() };
    let mut networks = Vec::new();
    let mut files = Vec::new();
    for (i, source) in cfg.sources()?.into_iter().enumerate() {
        let run = run_network(source.name().to_owned(), source.load()?, cfg)?;
        let rows = simulate_network(
            &run.graph,
            &run.traces,
            &run.k_grid,
            &ratios,
            e.sim_trials,
            &cfg.dynamics,
            e.seed,
            i,
            &cfg.select_options(),
        )?;
        let mut sink = CsvSink::create(out_path(cfg, "simulate", &run.name), &SIMULATION_HEADER)?;
        for r in &rows {
            sink.row([
                r.strategy.name().to_owned(),
                r.k.to_string(),
                r.seed.to_string(),
                fmt_f64(r.failure_ratio),
                fmt_sync_time(&r.summary),
                fmt_f64(r.summary.final_error),
                fmt_f64(r.lambda1),
            ])?;
        }
        files.push(sink.finish()?);
        networks.push((run, rows));
    }
    Ok(SimulationReport { networks, files })
}

/// Writes every generated network of the config as an edge list.
pub fn generate_networks(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for source in cfg.sources()? {
        if let NetworkSource::Generated { name, spec } = &source {
            let graph = spec.generate()?;
            std::fs::create_dir_all(&cfg.experiment.output_dir)?;
            let path = cfg.experiment.output_dir.join(format!("{}.edges", slug(name)));
            let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
            write_edge_list(&graph, file)?;
            files.push(path);
        }
    }
    Ok(files)
}

/// Plateau check for one strategy and budget on a loaded network.
#[derive(Debug, Clone, PartialEq)]
pub struct PlateauRow {
    pub strategy: StrategyKind,
    pub k: usize,
    pub lambda1: f64,
    pub min_unpinned_degree: usize,
}

impl PlateauRow {
    pub fn within_bound(&self) -> bool {
        self.lambda1 <= self.min_unpinned_degree as f64 + 1e-9
    }
}

#[derive(Debug, Clone)]
pub struct RealNetworkResult {
    pub run: NetworkRun,
    pub load: LoadReport,
    pub robustness: Vec<RobustnessCurve>,
    pub plateau: Vec<PlateauRow>,
}

#[derive(Debug, Clone)]
pub struct RealNetworkReport {
    pub networks: Vec<RealNetworkResult>,
    pub files: Vec<PathBuf>,
}

/// Smallest degree among nodes outside `pins`.
fn min_unpinned_degree(graph: &Graph, pins: &[usize]) -> usize {
    let mut pinned = vec![false; graph.node_count()];
    for &v in pins {
        pinned[v] = true;
    }
    (0..graph.node_count()).filter(|&v| !pinned[v]).map(|v| graph.degree(v)).min().unwrap_or(0)
}

/// Curves, robustness and the `lambda1` plateau on user-supplied edge lists.
pub fn run_real_network_suite(datasets: &[(String, PathBuf)], cfg: &ExperimentConfig) -> Result<RealNetworkReport> {
    for (name, path) in datasets {
        check_readable(name, path)?;
    }
    let mut networks = Vec::new();
    let mut files = Vec::new();
    let mut plateau_sink = CsvSink::create(
        cfg.experiment.output_dir.join("plateau.csv"),
        &["network", "n", "m", "min_degree", "strategy", "k", "lambda1", "min_unpinned_degree"],
    )?;
    for (i, (name, path)) in datasets.iter().enumerate() {
        let (graph, load) = load_edge_list_file(path)?;
        let run = run_network(name.clone(), graph, cfg)?;
        let robustness = robustness_for(&run, i, cfg)?;
        let mut plateau = Vec::new();
        for trace in &run.traces {
            for (j, step) in trace.steps.iter().enumerate() {
                let row = PlateauRow {
                    strategy: trace.strategy,
                    k: j + 1,
                    lambda1: step.lambda1,
                    min_unpinned_degree: min_unpinned_degree(&run.graph, &trace.nodes()[..=j]),
                };
                if run.k_grid.contains(&row.k) {
                    plateau_sink.row([
                        name.clone(),
                        run.graph.node_count().to_string(),
                        run.graph.edge_count().to_string(),
                        run.graph.min_degree().to_string(),
                        row.strategy.name().to_owned(),
                        row.k.to_string(),
                        fmt_f64(row.lambda1),
                        row.min_unpinned_degree.to_string(),
                    ])?;
                }
                plateau.push(row);
            }
        }
        files.push(write_curve(&out_path(cfg, "curve", name), &run)?);
        files.push(write_robustness(&out_path(cfg, "robustness", name), &robustness)?);
        networks.push(RealNetworkResult { run, load, robustness, plateau });
    }
    files.push(plateau_sink.finish()?);
    Ok(RealNetworkReport { networks, files })
}
