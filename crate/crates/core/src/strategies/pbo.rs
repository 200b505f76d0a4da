//! Perturbation-based selection: one eigensolve per step, then a linear scan.
//!
//! Moving node `i` from the unpinned set to the pinned set deletes row and
//! column `i` of the grounded Laplacian. To first order this raises `lambda1`
//! by `u_i^2 (d_i - 2 lambda1)`, where `u` is the current unit eigenvector and
//! `d_i` the full-graph degree.

use std::time::Instant;

use super::state::PinState;
use super::{check_budget, SelectionTrace, Step, StrategyKind};
use crate::error::Result;
use crate::graph::{Graph, GroundedView};
use crate::spectral::{SolverOptions, SpectralPair};

/// Scores within this (relative) distance of the best count as tied.
pub(crate) const SCORE_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationScore {
    pub node: usize,
    pub delta: f64,
}

/// First-order `lambda1` gain of every unpinned node of `view`.
///
/// `pair` must be the eigenpair of `view`; its vector is in local coordinates.
pub fn perturbation_scores(view: &GroundedView<'_>, pair: &SpectralPair) -> Vec<PerturbationScore> {
    let g = view.graph();
    view.unpinned()
        .iter()
        .zip(&pair.u)
        .map(|(&node, &ui)| PerturbationScore { node, delta: score(ui, g.degree(node), pair.lambda1) })
        .collect()
}

#[inline]
fn score(ui: f64, degree: usize, lambda: f64) -> f64 {
    ui * ui * (degree as f64 - 2.0 * lambda)
}

pub fn select_pbo(graph: &Graph, k: usize, opts: &SolverOptions) -> Result<SelectionTrace> {
    check_budget(graph.node_count(), k)?;
    let mut state = PinState::new(graph);
    let mut pair = state.solve(None, opts)?;
    let mut steps = Vec::with_capacity(k);
    for _ in 0..k {
        let start = Instant::now();
        let mut best: Option<(usize, f64)> = None;
        for &i in state.active() {
            let s = score(pair.x[i], graph.degree(i), pair.lambda1);
            match best {
                Some((_, b)) if s <= b + SCORE_TIE * b.abs().max(1.0) => {}
                _ => best = Some((i, s)),
            }
        }
        let (node, delta) = best.expect("budget leaves an unpinned node");
        state.pin(node);
        let mut warm = pair.x;
        warm[node] = 0.0;
        pair = state.solve(Some(&warm), opts)?;
        steps.push(Step { node, lambda1: pair.lambda1, score: delta, elapsed: start.elapsed() });
    }
    Ok(SelectionTrace { strategy: StrategyKind::Pbo, k, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::PinSet;
    use crate::spectral::smallest_eigenpair;
    use approx::assert_abs_diff_eq;

    #[test]
    fn first_pick_is_max_degree() {
        let g = star(5);
        let t = select_pbo(&g, 1, &SolverOptions::default()).unwrap();
        assert_eq!(t.nodes(), vec![0]);
        assert_abs_diff_eq!(t.steps[0].score, 4.0 / 5.0, epsilon = 1e-12);
    }

    #[test]
    fn star_scores_after_leaf_pin() {
        let g = star(4);
        let view = GroundedView::new(&g, &PinSet::new(&g, vec![1], "t").unwrap()).unwrap();
        let pair = smallest_eigenpair(&view, &SolverOptions::default()).unwrap();
        let scores = perturbation_scores(&view, &pair);
        assert_eq!(scores[0].node, 0);
        assert_abs_diff_eq!(scores[0].delta, 0.5207, epsilon = 1e-4);
        assert_abs_diff_eq!(scores[1].delta, 0.1830, epsilon = 1e-4);
    }

    #[test]
    fn symmetric_tie_goes_to_smaller_index() {
        let g = complete(3);
        let t = select_pbo(&g, 2, &SolverOptions::default()).unwrap();
        assert_eq!(t.nodes(), vec![0, 1]);
    }
}
