use std::path::{Path, PathBuf};
use std::time::Duration;

use super::config::ExperimentConfig;
use super::output::{fmt_f64, fmt_ms, CsvSink};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::strategies::{select, SelectOptions, SelectionTrace, StrategyKind};

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRecord {
    pub strategy: StrategyKind,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// Time spent choosing the `k` pins (see [`crate::strategies::Step::elapsed`]).
    pub wall: Duration,
}

impl TimingRecord {
    pub fn from_trace(graph: &Graph, trace: &SelectionTrace) -> Self {
        TimingRecord {
            strategy: trace.strategy,
            n: graph.node_count(),
            m: graph.edge_count(),
            k: trace.k,
            wall: trace.selection_time(),
        }
    }
}

pub const TIMING_HEADER: [&str; 5] = ["strategy", "n", "m", "k", "wall_ms"];

pub fn write_timing(path: impl AsRef<Path>, records: &[TimingRecord]) -> Result<PathBuf> {
    let mut sink = CsvSink::create(path, &TIMING_HEADER)?;
    for r in records {
        sink.row([r.strategy.name().to_owned(), r.n.to_string(), r.m.to_string(), r.k.to_string(), fmt_ms(r.wall)])?;
    }
    sink.finish()
}

/// Times one selection after a discarded single-pin warm-up on the same graph.
pub fn time_selection(graph: &Graph, strategy: StrategyKind, k: usize, opts: &SelectOptions) -> Result<TimingRecord> {
    select(graph, strategy, 1, opts)?;
    let trace = select(graph, strategy, k, opts)?;
    Ok(TimingRecord::from_trace(graph, &trace))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Speedup {
    pub network: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// BFG wall time over PBO wall time.
    pub bfg_over_pbo: f64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub records: Vec<(String, TimingRecord)>,
    /// Exponent of PBO time against edge count.
    pub pbo_exponent: Option<f64>,
    pub speedups: Vec<Speedup>,
    pub files: Vec<PathBuf>,
}

/// Selection wall times across the configured networks, run sequentially.
pub fn run_timing_benchmark(cfg: &ExperimentConfig) -> Result<BenchReport> {
    let sources = cfg.sources()?;
    if sources.len() < 3 {
        return Err(Error::Config(format!("the benchmark needs at least 3 networks, got {}", sources.len())));
    }
    let opts = cfg.select_options();
    let mut records = Vec::new();
    let mut speedups = Vec::new();
    for source in &sources {
        let graph = source.load()?;
        let k = cfg.experiment.bench_k.resolve(graph.node_count())?;
        let mut pbo = None;
        let mut bfg = None;
        for &s in &cfg.experiment.strategies {
            let r = time_selection(&graph, s, k, &opts)?;
            match s {
                StrategyKind::Pbo => pbo = Some(r.wall),
                StrategyKind::Bfg => bfg = Some(r.wall),
                _ => {}
            }
            records.push((source.name().to_owned(), r));
        }
        if let (Some(p), Some(b)) = (pbo, bfg) {
            speedups.push(Speedup {
                network: source.name().to_owned(),
                n: graph.node_count(),
                m: graph.edge_count(),
                k,
                bfg_over_pbo: b.as_secs_f64() / p.as_secs_f64(),
            });
        }
    }
    let pbo_points: Vec<(f64, f64)> = records
        .iter()
        .filter(|(_, r)| r.strategy == StrategyKind::Pbo)
        .map(|(_, r)| (r.m as f64, r.wall.as_secs_f64()))
        .collect();
    let pbo_exponent = loglog_slope(&pbo_points);

    let dir = &cfg.experiment.output_dir;
    let timing: Vec<TimingRecord> = records.iter().map(|(_, r)| r.clone()).collect();
    let mut files = vec![write_timing(dir.join("bench_timing.csv"), &timing)?];
    let mut sink = CsvSink::create(dir.join("bench_summary.csv"), &["metric", "network", "value"])?;
    if let Some(e) = pbo_exponent {
        sink.row(["pbo_time_vs_m_exponent".to_owned(), String::new(), fmt_f64(e)])?;
    }
    for s in &speedups {
        sink.row(["bfg_over_pbo".to_owned(), s.network.clone(), fmt_f64(s.bfg_over_pbo)])?;
    }
    files.push(sink.finish()?);
    Ok(BenchReport { records, pbo_exponent, speedups, files })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(1.25))).collect();
        assert!((loglog_slope(&pts).unwrap() - 1.25).abs() < 1e-12);
        assert_eq!(loglog_slope(&pts[..1]), None);
    }
}
