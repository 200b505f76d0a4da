use super::bfg::LAMBDA_TIE;
use super::check_budget;
use super::state::PinState;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::SolverOptions;

pub const EXHAUSTIVE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveResult {
    /// Ascending; the lexicographically smallest maximizer.
    pub pins: Vec<usize>,
    pub lambda1: f64,
    pub subsets: u64,
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
        if c > u64::MAX as u128 {
            return c;
        }
    }
    c
}

/// The `k`-subset of pins with the largest `lambda1`, by enumeration.
pub fn exhaustive_oracle(graph: &Graph, k: usize, opts: &SolverOptions) -> Result<ExhaustiveResult> {
    let n = graph.node_count();
    check_budget(n, k)?;
    let total = binomial(n, k);
    if total > EXHAUSTIVE_CAP as u128 {
        return Err(Error::CombinatorialCap { n, k, cap: EXHAUSTIVE_CAP });
    }

    let mut subset: Vec<usize> = (0..k).collect();
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut count = 0u64;
    loop {
        let mut state = PinState::new(graph);
        for &v in &subset {
            state.pin(v);
        }
        let lambda = state.solve(None, opts)?.lambda1;
        count += 1;
        let better = match &best {
            None => true,
            Some((_, b)) => lambda > b + LAMBDA_TIE * b.abs().max(1.0),
        };
        if better {
            best = Some((subset.clone(), lambda));
        }

        // next combination in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) else {
            break;
        };
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
    let (pins, lambda1) = best.expect("at least one subset");
    Ok(ExhaustiveResult { pins, lambda1, subsets: count })
}
