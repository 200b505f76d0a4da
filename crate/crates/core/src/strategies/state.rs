//! Incremental pin bookkeeping shared by the greedy strategies.

use crate::error::Result;
use crate::graph::Graph;
use crate::spectral::{solve_padded, PaddedPair, SolverOptions};

pub(crate) struct PinState<'g> {
    graph: &'g Graph,
    /// Unpinned nodes, ascending.
    active: Vec<usize>,
    /// Pins per connected component of the whole graph.
    pins_in: Vec<usize>,
    pin_free: usize,
}

impl<'g> PinState<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        PinState {
            graph,
            active: (0..graph.node_count()).collect(),
            pins_in: vec![0; graph.component_count()],
            pin_free: graph.component_count(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn pin(&mut self, v: usize) {
        let pos = self.active.binary_search(&v).expect("pinning an active node");
        self.active.remove(pos);
        let c = self.graph.component_of(v);
        if self.pins_in[c] == 0 {
            self.pin_free -= 1;
        }
        self.pins_in[c] += 1;
    }

    /// Smallest-index component without a pin; `lambda1` is zero while one exists.
    pub fn ungrounded(&self) -> Option<usize> {
        if self.pin_free == 0 {
            return None;
        }
        self.pins_in.iter().position(|&p| p == 0)
    }

    /// Whether `lambda1` stays zero after additionally pinning `v`.
    pub fn ungrounded_after(&self, v: usize) -> bool {
        let freed = usize::from(self.pins_in[self.graph.component_of(v)] == 0);
        self.pin_free - freed > 0
    }

    pub fn solve(&self, warm: Option<&[f64]>, opts: &SolverOptions) -> Result<PaddedPair> {
        solve_padded(self.graph, &self.active, self.ungrounded(), warm, opts)
    }
}
