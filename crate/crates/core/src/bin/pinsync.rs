use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pinsync::harness::{
    generate_networks, output, run_curve_experiment, run_real_network_suite, run_robustness_experiment,
    run_simulation_experiment, run_timing_benchmark, ExperimentConfig, NetworkEntry,
};
use pinsync::{load_edge_list_file, select, write_edge_list, Budget, ChenVariant, Error, Model, Result, StrategyKind};

/// Pinning-node selection and synchronization experiments.
///
/// The worker count for parallel sections comes from PINSYNC_WORKERS.
#[derive(Parser)]
#[command(name = "pinsync", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write synthetic networks as edge lists.
    Generate(Common),
    /// Select pins on one network and write the trace.
    Select {
        #[command(flatten)]
        common: Common,
        /// Budget: a count, a fraction ("0.1") or a percentage ("10%").
        #[arg(long, default_value = "10%")]
        k: Budget,
        /// Trace CSV; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// lambda1 against k for every network and strategy.
    Curve(Common),
    /// Pinned Chen oscillator trajectories and sync times.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        gain: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        variant: Option<ChenVariant>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Effective lambda1 under random pin failures.
    Robustness {
        #[command(flatten)]
        common: Common,
        /// Comma-separated failure ratios.
        #[arg(long, value_delimiter = ',')]
        ratios: Option<Vec<f64>>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Selection wall times and scaling across at least three networks.
    Bench {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: Option<Budget>,
    },
    /// Curves, robustness and the lambda1 plateau on edge-list files.
    Real {
        #[command(flatten)]
        common: Common,
        /// Datasets as NAME=PATH or PATH.
        #[arg(required = true)]
        datasets: Vec<String>,
    },
}

#[derive(Args)]
struct Common {
    /// TOML experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Root seed for every random stream.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Comma-separated subset of degree, betweenness, bfg, pbo.
    #[arg(long, value_delimiter = ',')]
    strategies: Option<Vec<StrategyKind>>,
    /// Comma-separated budgets, e.g. "10,20,30%".
    #[arg(long, value_delimiter = ',')]
    k_grid: Option<Vec<Budget>>,
    /// Use an edge-list file instead of the configured networks.
    #[arg(long, conflicts_with = "model")]
    input: Option<PathBuf>,
    /// Use one synthetic network instead of the configured networks.
    #[arg(long)]
    model: Option<Model>,
    #[arg(long, requires = "model")]
    n: Option<usize>,
    /// BA attachment count.
    #[arg(long)]
    ba_m: Option<usize>,
    #[arg(long)]
    er_p: Option<f64>,
    #[arg(long)]
    ws_k: Option<usize>,
    #[arg(long)]
    ws_p: Option<f64>,
    /// Skip BFG candidates that cannot win (same picks, fewer solves).
    #[arg(long)]
    bfg_pruning: bool,
}

impl Common {
    /// The config file (or defaults) with command-line overrides applied.
    fn base_config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        let e = &mut cfg.experiment;
        if let Some(seed) = self.seed {
            e.seed = seed;
        }
        if let Some(dir) = &self.out_dir {
            e.output_dir = dir.clone();
        }
        if let Some(s) = &self.strategies {
            e.strategies = s.clone();
        }
        if let Some(k) = &self.k_grid {
            e.k_grid = k.clone();
        }
        e.bfg_pruning |= self.bfg_pruning;
        Ok(cfg)
    }

    /// Like [`Common::base_config`], with `--input` or `--model` replacing the networks.
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = self.base_config()?;
        if let Some(path) = &self.input {
            cfg.networks = vec![NetworkEntry { path: Some(path.clone()), ..Default::default() }];
            cfg = cfg.with_base_dir("");
        } else if let Some(model) = self.model {
            cfg.networks = vec![NetworkEntry {
                model: Some(model),
                n: self.n,
                ba_m: self.ba_m,
                er_p: self.er_p,
                ws_k: self.ws_k,
                ws_p: self.ws_p,
                ..Default::default()
            }];
        }
        if cfg.networks.is_empty() {
            return Err(Error::Config("no network: pass --config, --input or --model with --n".into()));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn report(files: &[PathBuf]) {
    for f in files {
        eprintln!("wrote {}", f.display());
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(common) => {
            if let Some(path) = &common.input {
                // re-emit a loaded file in canonical form
                let (g, _) = load_edge_list_file(path)?;
                write_edge_list(&g, std::io::stdout().lock())?;
                return Ok(());
            }
            report(&generate_networks(&common.config()?)?);
        }
        Command::Select { common, k, out } => {
            let cfg = common.config()?;
            let source = cfg.sources()?.remove(0);
            let graph = source.load()?;
            let k = k.resolve(graph.node_count())?;
            let opts = cfg.select_options();
            let mut buf = Vec::new();
            {
                let mut w = csv::Writer::from_writer(&mut buf);
                w.write_record(output::TRACE_HEADER)?;
                for &s in &cfg.experiment.strategies {
                    let trace = select(&graph, s, k, &opts)?;
                    for (j, step) in trace.steps.iter().enumerate() {
                        w.write_record([
                            s.name().to_owned(),
                            (j + 1).to_string(),
                            graph.label(step.node).to_owned(),
                            output::fmt_f64(step.lambda1),
                            output::fmt_f64(step.score),
                        ])?;
                    }
                }
                w.flush()?;
            }
            match out {
                Some(path) => {
                    std::fs::write(&path, &buf)?;
                    report(&[path]);
                }
                None => {
                    use std::io::Write;
                    std::io::stdout().lock().write_all(&buf)?;
                }
            }
        }
        Command::Curve(common) => {
            let r = run_curve_experiment(&common.config()?)?;
            for net in &r.networks {
                for t in &net.traces {
                    println!("{}\t{}\tk={}\tlambda1={}", net.name, t.strategy, t.k, t.final_lambda1());
                }
            }
            report(&r.files);
        }
        Command::Simulate { common, c, gain, dt, t_max, eps, variant, trials } => {
            let mut cfg = common.config()?;
            let d = &mut cfg.dynamics;
            d.c = c.unwrap_or(d.c);
            d.gain = gain.unwrap_or(d.gain);
            d.dt = dt.unwrap_or(d.dt);
            d.t_max = t_max.unwrap_or(d.t_max);
            d.eps = eps.unwrap_or(d.eps);
            d.chen_variant = variant.unwrap_or(d.chen_variant);
            if let Some(t) = trials {
                cfg.experiment.sim_trials = t;
            }
            cfg.validate()?;
            report(&run_simulation_experiment(&cfg)?.files);
        }
        Command::Robustness { common, ratios, trials } => {
            let mut cfg = common.config()?;
            if let Some(r) = ratios {
                cfg.experiment.failure_ratios = r;
            }
            if let Some(t) = trials {
                cfg.experiment.trials = t;
            }
            cfg.validate()?;
            report(&run_robustness_experiment(&cfg)?.files);
        }
        Command::Bench { common, k } => {
            let mut cfg = common.config()?;
            if let Some(k) = k {
                cfg.experiment.bench_k = k;
            }
            let r = run_timing_benchmark(&cfg)?;
            for (net, rec) in &r.records {
                println!(
                    "{net}\t{}\tn={}\tm={}\tk={}\t{:.3} ms",
                    rec.strategy,
                    rec.n,
                    rec.m,
                    rec.k,
                    rec.wall.as_secs_f64() * 1e3
                );
            }
            if let Some(e) = r.pbo_exponent {
                println!("pbo time ~ M^{e:.3}");
            }
            for s in &r.speedups {
                println!("{}\tbfg/pbo = {:.1}", s.network, s.bfg_over_pbo);
            }
            report(&r.files);
        }
        Command::Real { common, datasets } => {
            let cfg = common.base_config()?;
            let datasets: Vec<(String, PathBuf)> = datasets
                .iter()
                .map(|d| match d.split_once('=') {
                    Some((name, path)) => (name.to_owned(), PathBuf::from(path)),
                    None => {
                        let path = PathBuf::from(d);
                        let name = path.file_stem().map_or_else(|| d.clone(), |s| s.to_string_lossy().into_owned());
                        (name, path)
                    }
                })
                .collect();
            let r = run_real_network_suite(&datasets, &cfg)?;
            for net in &r.networks {
                let violations = net.plateau.iter().filter(|p| !p.within_bound()).count();
                println!(
                    "{}\tN={}\tM={}\tmin_degree={}\tbound violations={violations}",
                    net.run.name,
                    net.run.graph.node_count(),
                    net.run.graph.edge_count(),
                    net.run.graph.min_degree()
                );
            }
            report(&r.files);
        }
    }
    Ok(())
}

fn init_workers() {
    if let Some(n) = std::env::var("PINSYNC_WORKERS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // fails only if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    init_workers();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
