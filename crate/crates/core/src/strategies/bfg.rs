//! Greedy selection by exact `lambda1` of every candidate.
//!
//! Each candidate solve is warm-started from the incumbent eigenvector with
//! the candidate's entry zeroed. By default every candidate is solved to
//! convergence.
//!
//! With pruning enabled, candidates are ranked by an O(1) upper bound on their
//! `lambda1`: the Rayleigh quotient of the incumbent vector with the
//! candidate's entry removed. They are solved in decreasing order of that
//! bound, and a solve is abandoned once its own Rayleigh quotient (also an
//! upper bound) drops below the best value found so far. Candidates whose
//! bound is already below the best are skipped. The chosen node, including
//! its tie-break, is the same as with full evaluation.

use std::time::Instant;

use rayon::prelude::*;

use super::state::PinState;
use super::{check_budget, SelectionTrace, Step, StrategyKind};
use crate::error::Result;
use crate::graph::Graph;
use crate::spectral::{solve_bounded, Outcome, PaddedPair, SolverOptions};

/// Candidate values within this (relative) distance of the best count as tied.
pub(crate) const LAMBDA_TIE: f64 = 1e-9;

fn tie_band(best: f64) -> f64 {
    LAMBDA_TIE * best.abs().max(1.0)
}

/// Rayleigh quotient of `x` with entry `v` removed, given `L_hat x = lambda x`.
fn upper_bound(lambda: f64, xv: f64, degree: usize) -> f64 {
    let w = xv * xv;
    if w >= 1.0 - 1e-12 {
        return f64::INFINITY;
    }
    (lambda + w * (degree as f64 - 2.0 * lambda)) / (1.0 - w)
}

pub fn select_bfg(graph: &Graph, k: usize, opts: &SolverOptions) -> Result<SelectionTrace> {
    run(graph, k, opts, false)
}

/// [`select_bfg`] with bound-based pruning; same picks, far fewer solves.
pub fn select_bfg_pruned(graph: &Graph, k: usize, opts: &SolverOptions) -> Result<SelectionTrace> {
    run(graph, k, opts, true)
}

fn run(graph: &Graph, k: usize, opts: &SolverOptions, prune: bool) -> Result<SelectionTrace> {
    check_budget(graph.node_count(), k)?;
    let mut state = PinState::new(graph);
    let mut incumbent = state.solve(None, opts)?;
    let mut steps = Vec::with_capacity(k);

    for _ in 0..k {
        let start = Instant::now();
        let lambda = incumbent.lambda1;
        let x = &incumbent.x;

        let mut best = f64::NEG_INFINITY;
        // (node, lambda1, eigenpair if solved)
        let mut results: Vec<(usize, f64, Option<PaddedPair>)> = Vec::new();
        let mut queue: Vec<(usize, f64)> = Vec::with_capacity(state.active().len());
        for &v in state.active() {
            if state.ungrounded_after(v) {
                results.push((v, 0.0, None));
                best = best.max(0.0);
            } else {
                queue.push((v, upper_bound(lambda, x[v], graph.degree(v))));
            }
        }
        if prune {
            queue.sort_unstable_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            let mut warm = x.clone();
            for &(v, ub) in &queue {
                if ub < best - tie_band(best) {
                    break;
                }
                let abandon = best.is_finite().then(|| best - tie_band(best));
                if let Some(pair) = solve_candidate(&state, v, &mut warm, opts, abandon)? {
                    best = best.max(pair.lambda1);
                    results.push((v, pair.lambda1, Some(pair)));
                }
            }
        } else {
            let solved: Vec<(usize, PaddedPair)> = queue
                .par_iter()
                .map_init(
                    || x.clone(),
                    |warm, &(v, _)| {
                        let pair = solve_candidate(&state, v, warm, opts, None)?;
                        Ok((v, pair.expect("no abandon bound")))
                    },
                )
                .collect::<Result<_>>()?;
            for (v, pair) in solved {
                best = best.max(pair.lambda1);
                results.push((v, pair.lambda1, Some(pair)));
            }
        }

        let (node, value, pair) = results
            .into_iter()
            .filter(|r| r.1 >= best - tie_band(best))
            .min_by_key(|r| r.0)
            .expect("some candidate attains the maximum");
        state.pin(node);
        incumbent = match pair {
            Some(pair) => pair,
            None => state.solve(None, opts)?,
        };
        steps.push(Step { node, lambda1: value, score: value, elapsed: start.elapsed() });
    }
    Ok(SelectionTrace { strategy: StrategyKind::Bfg, k, steps })
}

/// Solves the view with `v` additionally pinned; `None` if abandoned.
fn solve_candidate(
    state: &PinState<'_>,
    v: usize,
    warm: &mut [f64],
    opts: &SolverOptions,
    abandon: Option<f64>,
) -> Result<Option<PaddedPair>> {
    let mut active = state.active().to_vec();
    active.remove(active.binary_search(&v).expect("candidate is active"));
    let saved = std::mem::replace(&mut warm[v], 0.0);
    let outcome = solve_bounded(state.graph(), &active, None, Some(warm), opts, abandon);
    warm[v] = saved;
    Ok(match outcome? {
        Outcome::Converged { lambda, x, residual, iterations } => {
            Some(PaddedPair { lambda1: lambda, x, residual, iterations })
        }
        Outcome::Abandoned => None,
    })
}
