#![allow(dead_code)]

use pinsync::{GenSpec, Graph, GroundedView, PinSet, SelectionTrace};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random BA, ER or WS graph on `n` nodes.
pub fn random_graph(n: usize, family: u8, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let spec = match family % 3 {
        0 => GenSpec::ba(n, rng.gen_range(1..=3.min(n - 1)), seed),
        1 => GenSpec::er(n, rng.gen_range(0.05..0.4), seed),
        _ => {
            let k = 2 * rng.gen_range(1..=3.min((n - 1) / 2));
            GenSpec::ws(n, k, rng.gen_range(0.0..0.5), seed)
        }
    };
    spec.generate().unwrap()
}

/// `size` distinct nodes drawn with `seed`.
pub fn random_pins(g: &Graph, size: usize, seed: u64) -> PinSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes: Vec<usize> = (0..g.node_count()).collect();
    nodes.shuffle(&mut rng);
    nodes.truncate(size);
    PinSet::new(g, nodes, "random").unwrap()
}

pub fn view<'g>(g: &'g Graph, pins: &PinSet) -> GroundedView<'g> {
    GroundedView::new(g, pins).unwrap()
}

/// (graph, pins) with N in `n_range` and 1..=N/2 pins.
pub fn graph_and_pins(n_range: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (Graph, PinSet)> {
    (n_range, any::<u8>(), any::<u64>(), any::<u64>(), 0.0..1.0f64).prop_map(|(n, fam, gs, ps, frac)| {
        let g = random_graph(n, fam, gs);
        let size = 1 + ((n / 2 - 1) as f64 * frac).round() as usize;
        let pins = random_pins(&g, size, ps);
        (g, pins)
    })
}

/// Nondecreasing lambda1 and the min-unpinned-degree bound at every step.
pub fn interlacing_violations(g: &Graph, trace: &SelectionTrace) -> Vec<String> {
    let mut out = Vec::new();
    let mut pinned = vec![false; g.node_count()];
    let mut prev = 0.0f64;
    for (j, step) in trace.steps.iter().enumerate() {
        pinned[step.node] = true;
        let bound = (0..g.node_count()).filter(|&v| !pinned[v]).map(|v| g.degree(v)).min().unwrap_or(0) as f64;
        if step.lambda1 < prev - 1e-9 * prev.max(1.0) {
            out.push(format!("{} step {}: lambda1 fell from {prev} to {}", trace.strategy, j + 1, step.lambda1));
        }
        if step.lambda1 > bound + 1e-9 * bound.max(1.0) {
            out.push(format!("{} step {}: lambda1 {} above degree bound {bound}", trace.strategy, j + 1, step.lambda1));
        }
        prev = step.lambda1;
    }
    out
}

/// Dense `lambda1` with `pins` grounded, or 0 when the view is ungrounded.
pub fn dense_lambda1(g: &Graph, pins: &[usize]) -> f64 {
    let set = PinSet::new(g, pins.to_vec(), "dense").unwrap();
    let v = view(g, &set);
    if !v.is_grounded() {
        return 0.0;
    }
    pinsync::dense_spectrum_oracle(&v).unwrap().values[0]
}

/// Steps where the greedy pick is not the dense-oracle argmax under the
/// smallest-index tie-break (ties within `1e-9 * max(1, best)`).
pub fn bfg_step_violations(g: &Graph, trace: &SelectionTrace) -> Vec<String> {
    const TIE: f64 = 1e-9;
    const SLACK: f64 = 1e-11;
    let mut out = Vec::new();
    let mut prefix: Vec<usize> = Vec::new();
    for (j, step) in trace.steps.iter().enumerate() {
        let candidates: Vec<(usize, f64)> = (0..g.node_count())
            .filter(|v| !prefix.contains(v))
            .map(|v| {
                let mut p = prefix.clone();
                p.push(v);
                (v, dense_lambda1(g, &p))
            })
            .collect();
        let best = candidates.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        let scale = best.abs().max(1.0);
        let chosen = candidates.iter().find(|c| c.0 == step.node).unwrap().1;
        if chosen < best - TIE * scale {
            out.push(format!("step {}: node {} has {chosen}, best is {best}", j + 1, step.node));
        }
        if let Some(w) = candidates.iter().find(|c| c.0 < step.node && c.1 >= chosen - (TIE - SLACK) * scale) {
            out.push(format!("step {}: node {} ties {} with smaller index {}", j + 1, step.node, chosen, w.0));
        }
        prefix.push(step.node);
    }
    out
}
