//! Undirected simple graphs, pin sets and grounded Laplacian views.
//!
//! A [`Graph`] is immutable once built. Node indices are dense (`0..n`),
//! adjacency is stored in CSR form with every neighbor list sorted, and the
//! connected components of the whole graph are cached because the grounded
//! views need them to decide structurally whether `lambda1` vanishes.

mod edge_list;
mod grounded;

pub use edge_list::{load_edge_list, load_edge_list_file, write_edge_list, LoadReport};
pub use grounded::{unpinned_components, GroundedView, UnpinnedComponent};

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adjacency: Vec<usize>,
    labels: Vec<String>,
    edge_count: usize,
    component_of: Vec<usize>,
    component_count: usize,
}

/// Counters for input edges that were dropped while building a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DropCounts {
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

impl Graph {
    /// Builds a graph on `n` nodes labelled `"0".."n-1"`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_labelled_edges(labels, edges).map(|(g, _)| g)
    }

    /// Builds a graph, silently dropping self-loops and duplicate edges.
    pub fn from_labelled_edges(
        labels: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<(Self, DropCounts)> {
        let n = labels.len();
        let mut drops = DropCounts::default();
        let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidParameter(format!("edge ({a}, {b}) out of range for {n} nodes")));
            }
            if a == b {
                drops.self_loops += 1;
                continue;
            }
            lists[a].push(b);
            lists[b].push(a);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut adjacency = Vec::new();
        offsets.push(0);
        let mut half_edges = 0usize;
        for list in &mut lists {
            let before = list.len();
            list.sort_unstable();
            list.dedup();
            half_edges += before - list.len();
            adjacency.extend_from_slice(list);
            offsets.push(adjacency.len());
        }
        // each duplicate undirected edge leaves one surplus entry at both ends
        drops.duplicate_edges = half_edges / 2;
        let edge_count = adjacency.len() / 2;

        let mut graph = Graph { offsets, adjacency, labels, edge_count, component_of: Vec::new(), component_count: 0 };
        graph.label_components();
        Ok((graph, drops))
    }

    fn label_components(&mut self) {
        let n = self.node_count();
        let mut component_of = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if component_of[start] != usize::MAX {
                continue;
            }
            component_of[start] = count;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in self.neighbors(v) {
                    if component_of[w] == usize::MAX {
                        component_of[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        self.component_of = component_of;
        self.component_count = count;
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.node_count()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Iterates each undirected edge once as `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count())
            .flat_map(move |a| self.neighbors(a).iter().copied().filter(move |&b| b > a).map(move |b| (a, b)))
    }

    /// Component id of `v`; ids are numbered by their smallest node.
    #[inline]
    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count <= 1
    }

    /// Dense Laplacian `L = D - A`, for tests and small oracles.
    pub fn dense_laplacian(&self) -> nalgebra::DMatrix<f64> {
        let n = self.node_count();
        let mut l = nalgebra::DMatrix::zeros(n, n);
        for v in 0..n {
            l[(v, v)] = self.degree(v) as f64;
            for &w in self.neighbors(v) {
                l[(v, w)] = -1.0;
            }
        }
        l
    }
}

/// An ordered set of pinned nodes. Insertion order is the selection order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinSet {
    members: Vec<usize>,
    origin: String,
}

impl PinSet {
    pub fn new(graph: &Graph, members: Vec<usize>, origin: impl Into<String>) -> Result<Self> {
        let n = graph.node_count();
        if members.len() > n {
            return Err(Error::InvalidPins(format!("{} pins for {n} nodes", members.len())));
        }
        let mut seen = vec![false; n];
        for &v in &members {
            if v >= n {
                return Err(Error::InvalidPins(format!("node {v} out of range 0..{n}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPins(format!("node {v} pinned twice")));
            }
        }
        Ok(PinSet { members, origin: origin.into() })
    }

    /// Skips validation; for members produced by this crate's own selectors.
    pub(crate) fn from_trusted(members: Vec<usize>, origin: impl Into<String>) -> Self {
        PinSet { members, origin: origin.into() }
    }

    pub fn empty(origin: impl Into<String>) -> Self {
        PinSet { members: Vec::new(), origin: origin.into() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The first `k` selected pins.
    pub fn prefix(&self, k: usize) -> PinSet {
        PinSet { members: self.members[..k.min(self.members.len())].to_vec(), origin: self.origin.clone() }
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.members {
            mask[v] = true;
        }
        mask
    }
}
