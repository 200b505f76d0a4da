//! Pinning-node selection strategies.
//!
//! Every strategy is a pure function of the graph and the budget and returns a
//! [`SelectionTrace`]: the chosen nodes in order, `lambda1` after each
//! addition, the score that decided each pick and the time spent choosing.
//! Ties are always broken toward the smallest node index.

mod betweenness;
mod bfg;
mod exhaustive;
mod pbo;
mod state;

pub use betweenness::betweenness_centrality;
pub use bfg::{select_bfg, select_bfg_pruned};
pub use exhaustive::{exhaustive_oracle, ExhaustiveResult, EXHAUSTIVE_CAP};
pub use pbo::{perturbation_scores, select_pbo, PerturbationScore};

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, PinSet};
use crate::spectral::SolverOptions;
use state::PinState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyKind {
    Degree,
    Betweenness,
    Bfg,
    Pbo,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] =
        [StrategyKind::Degree, StrategyKind::Betweenness, StrategyKind::Bfg, StrategyKind::Pbo];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Degree => "degree",
            StrategyKind::Betweenness => "betweenness",
            StrategyKind::Bfg => "bfg",
            StrategyKind::Pbo => "pbo",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "degree" => Ok(StrategyKind::Degree),
            "betweenness" => Ok(StrategyKind::Betweenness),
            "bfg" => Ok(StrategyKind::Bfg),
            "pbo" => Ok(StrategyKind::Pbo),
            other => Err(Error::InvalidParameter(format!("unknown strategy {other:?}"))),
        }
    }
}

/// A pin budget, either absolute or a fraction of the node count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    Count(usize),
    Fraction(f64),
}

impl Budget {
    /// Absolute count for a graph of `n` nodes; fractions round half up.
    pub fn resolve(self, n: usize) -> Result<usize> {
        let k = match self {
            Budget::Count(k) => k,
            Budget::Fraction(f) => {
                if !(0.0..=1.0).contains(&f) {
                    return Err(Error::InvalidParameter(format!("budget fraction {f} outside [0, 1]")));
                }
                (f * n as f64 + 0.5 + 1e-9).floor() as usize
            }
        };
        check_budget(n, k)?;
        Ok(k)
    }
}

impl FromStr for Budget {
    type Err = Error;
    /// Accepts `"100"`, `"0.1"` or `"10%"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("cannot parse budget {s:?}"));
        if let Some(pct) = s.strip_suffix('%') {
            let v: f64 = pct.trim().parse().map_err(|_| bad())?;
            return Ok(Budget::Fraction(v / 100.0));
        }
        if let Ok(k) = s.parse::<usize>() {
            return Ok(Budget::Count(k));
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        if v < 1.0 {
            Ok(Budget::Fraction(v))
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Count(k) => write!(f, "{k}"),
            Budget::Fraction(x) => write!(f, "{}%", x * 100.0),
        }
    }
}

impl<'de> Deserialize<'de> for Budget {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Float(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(k) => Ok(Budget::Count(k as usize)),
            Raw::Float(x) if x < 1.0 => Ok(Budget::Fraction(x)),
            Raw::Float(x) => Err(serde::de::Error::custom(format!("budget {x} is neither a count nor a fraction"))),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Serialize for Budget {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Budget::Count(k) => s.serialize_u64(*k as u64),
            Budget::Fraction(x) => s.serialize_f64(*x),
        }
    }
}

pub(crate) fn check_budget(n: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::InvalidBudget { k, n });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub node: usize,
    /// `lambda1` of the grounded view after pinning `node`.
    pub lambda1: f64,
    /// The quantity the strategy maximized when it chose `node`.
    pub score: f64,
    /// Time spent choosing `node`. For degree and betweenness this excludes
    /// the `lambda1` bookkeeping, which those strategies do not need.
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionTrace {
    pub strategy: StrategyKind,
    pub k: usize,
    pub steps: Vec<Step>,
}

impl SelectionTrace {
    pub fn nodes(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.node).collect()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.lambda1).collect()
    }

    pub fn final_lambda1(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.lambda1)
    }

    pub fn pins(&self) -> PinSet {
        PinSet::from_trusted(self.nodes(), self.strategy.name())
    }

    /// The trace a run with budget `k` would have produced.
    pub fn prefix(&self, k: usize) -> SelectionTrace {
        SelectionTrace {
            strategy: self.strategy,
            k: k.min(self.k),
            steps: self.steps[..k.min(self.steps.len())].to_vec(),
        }
    }

    pub fn selection_time(&self) -> Duration {
        self.steps.iter().map(|s| s.elapsed).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SelectOptions {
    pub solver: SolverOptions,
    /// Skip BFG candidates that provably cannot win. Picks are unchanged.
    pub bfg_pruning: bool,
}

/// Runs `kind` with budget `k`.
pub fn select(graph: &Graph, kind: StrategyKind, k: usize, opts: &SelectOptions) -> Result<SelectionTrace> {
    let solver = &opts.solver;
    match kind {
        StrategyKind::Degree => select_degree(graph, k, solver),
        StrategyKind::Betweenness => select_betweenness(graph, k, solver),
        StrategyKind::Bfg if opts.bfg_pruning => select_bfg_pruned(graph, k, solver),
        StrategyKind::Bfg => select_bfg(graph, k, solver),
        StrategyKind::Pbo => select_pbo(graph, k, solver),
    }
}

/// The `k` highest-degree nodes.
pub fn select_degree(graph: &Graph, k: usize, opts: &SolverOptions) -> Result<SelectionTrace> {
    check_budget(graph.node_count(), k)?;
    let start = Instant::now();
    let keys: Vec<i64> = (0..graph.node_count()).map(|v| graph.degree(v) as i64).collect();
    let picked = top_k(&keys, k);
    let elapsed = start.elapsed();
    let scores = picked.iter().map(|&v| graph.degree(v) as f64).collect();
    static_trace(graph, StrategyKind::Degree, picked, scores, elapsed, opts)
}

/// The `k` nodes of highest shortest-path betweenness.
pub fn select_betweenness(graph: &Graph, k: usize, opts: &SolverOptions) -> Result<SelectionTrace> {
    check_budget(graph.node_count(), k)?;
    let start = Instant::now();
    let bc = betweenness_centrality(graph);
    // quantize so that floating noise between symmetric nodes cannot reorder them
    let keys: Vec<i64> = bc.iter().map(|&b| (b * 1e6).round() as i64).collect();
    let picked = top_k(&keys, k);
    let elapsed = start.elapsed();
    let scores = picked.iter().map(|&v| bc[v]).collect();
    static_trace(graph, StrategyKind::Betweenness, picked, scores, elapsed, opts)
}

/// Indices of the `k` largest keys, larger first, ties by smaller index.
fn top_k(keys: &[i64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    let by_rank = |a: &usize, b: &usize| keys[*b].cmp(&keys[*a]).then(a.cmp(b));
    if k < order.len() {
        order.select_nth_unstable_by(k, by_rank);
        order.truncate(k);
    }
    order.sort_unstable_by(by_rank);
    order
}

/// Pins a precomputed ranking one node at a time, recording `lambda1`.
fn static_trace(
    graph: &Graph,
    strategy: StrategyKind,
    picked: Vec<usize>,
    scores: Vec<f64>,
    elapsed: Duration,
    opts: &SolverOptions,
) -> Result<SelectionTrace> {
    let k = picked.len();
    let mut state = PinState::new(graph);
    let mut x = state.solve(None, opts)?.x;
    let mut steps = Vec::with_capacity(k);
    for (j, (&node, score)) in picked.iter().zip(scores).enumerate() {
        state.pin(node);
        x[node] = 0.0;
        let pair = state.solve(Some(&x), opts)?;
        steps.push(Step { node, lambda1: pair.lambda1, score, elapsed: if j == 0 { elapsed } else { Duration::ZERO } });
        x = pair.x;
    }
    Ok(SelectionTrace { strategy, k, steps })
}
