use std::collections::VecDeque;

use nalgebra::DMatrix;

use super::{Graph, PinSet};
use crate::error::{Error, Result};

const UNMAPPED: usize = usize::MAX;

/// The principal submatrix of the Laplacian over the unpinned nodes.
///
/// The matrix is never stored. Its diagonal holds full-graph degrees, and its
/// off-diagonal entries are `-1` for unpinned neighbor pairs.
#[derive(Debug, Clone)]
pub struct GroundedView<'g> {
    graph: &'g Graph,
    unpinned: Vec<usize>,
    index_map: Vec<usize>,
    pinned: Vec<bool>,
    pin_count: usize,
    ungrounded_component: Option<usize>,
}

impl<'g> GroundedView<'g> {
    pub fn new(graph: &'g Graph, pins: &PinSet) -> Result<Self> {
        let n = graph.node_count();
        // revalidate: the pin set may have been built against another graph
        let pins = PinSet::new(graph, pins.members().to_vec(), pins.origin())?;
        Self::from_mask(graph, pins.mask(n))
    }

    pub(crate) fn from_mask(graph: &'g Graph, pinned: Vec<bool>) -> Result<Self> {
        let n = graph.node_count();
        debug_assert_eq!(pinned.len(), n);
        let unpinned: Vec<usize> = (0..n).filter(|&v| !pinned[v]).collect();
        if unpinned.is_empty() {
            return Err(Error::EmptyView);
        }
        let mut index_map = vec![UNMAPPED; n];
        for (local, &v) in unpinned.iter().enumerate() {
            index_map[v] = local;
        }
        let ungrounded_component = first_pin_free_component(graph, &pinned);
        Ok(GroundedView { graph, pin_count: n - unpinned.len(), unpinned, index_map, pinned, ungrounded_component })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    /// Number of unpinned nodes, i.e. the matrix dimension.
    pub fn dim(&self) -> usize {
        self.unpinned.len()
    }

    pub fn unpinned(&self) -> &[usize] {
        &self.unpinned
    }

    pub fn pinned_mask(&self) -> &[bool] {
        &self.pinned
    }

    pub fn pin_count(&self) -> usize {
        self.pin_count
    }

    pub fn local_index(&self, node: usize) -> Option<usize> {
        match self.index_map[node] {
            UNMAPPED => None,
            i => Some(i),
        }
    }

    /// Smallest-index connected component of the graph that holds no pin.
    ///
    /// When present, that component is an unpinned component untouched by any
    /// pin, so `lambda1` is exactly zero.
    pub fn ungrounded_component(&self) -> Option<usize> {
        self.ungrounded_component
    }

    pub fn is_grounded(&self) -> bool {
        self.ungrounded_component.is_none()
    }

    /// `y = L_hat x` in local coordinates.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        for (local, &v) in self.unpinned.iter().enumerate() {
            let mut acc = self.graph.degree(v) as f64 * x[local];
            for &w in self.graph.neighbors(v) {
                let j = self.index_map[w];
                if j != UNMAPPED {
                    acc -= x[j];
                }
            }
            y[local] = acc;
        }
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut y = vec![0.0; self.dim()];
        self.matvec(x, &mut y);
        x.iter().zip(&y).map(|(a, b)| a * b).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (local, &v) in self.unpinned.iter().enumerate() {
            m[(local, local)] = self.graph.degree(v) as f64;
            for &w in self.graph.neighbors(v) {
                let j = self.index_map[w];
                if j != UNMAPPED {
                    m[(local, j)] = -1.0;
                }
            }
        }
        m
    }

    /// Expands a local vector to parent indexing, zero on pinned nodes.
    pub fn scatter(&self, local: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.graph.node_count()];
        for (i, &v) in self.unpinned.iter().enumerate() {
            full[v] = local[i];
        }
        full
    }

    /// Restricts a parent-indexed vector to the unpinned nodes.
    pub fn gather(&self, full: &[f64]) -> Vec<f64> {
        self.unpinned.iter().map(|&v| full[v]).collect()
    }

    /// Smallest full-graph degree among unpinned nodes (an upper bound on `lambda1`).
    pub fn min_unpinned_degree(&self) -> usize {
        self.unpinned.iter().map(|&v| self.graph.degree(v)).min().unwrap_or(0)
    }
}

fn first_pin_free_component(graph: &Graph, pinned: &[bool]) -> Option<usize> {
    let mut has_pin = vec![false; graph.component_count()];
    for (v, &p) in pinned.iter().enumerate() {
        if p {
            has_pin[graph.component_of(v)] = true;
        }
    }
    has_pin.iter().position(|&p| !p)
}

/// A connected component of the subgraph induced on the unpinned nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnpinnedComponent {
    /// Sorted node indices.
    pub nodes: Vec<usize>,
    /// Whether some node in the component has a pinned neighbor.
    pub touches_pinned: bool,
}

/// Components of the unpinned subgraph, ordered by smallest node.
pub fn unpinned_components(graph: &Graph, pins: &PinSet) -> Vec<UnpinnedComponent> {
    let n = graph.node_count();
    let pinned = pins.mask(n);
    let mut seen = pinned.clone();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut nodes = Vec::new();
        let mut touches_pinned = false;
        while let Some(v) = queue.pop_front() {
            nodes.push(v);
            for &w in graph.neighbors(v) {
                if pinned[w] {
                    touches_pinned = true;
                } else if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        nodes.sort_unstable();
        out.push(UnpinnedComponent { nodes, touches_pinned });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use nalgebra::dmatrix;

    fn pins(g: &Graph, m: &[usize]) -> PinSet {
        PinSet::new(g, m.to_vec(), "test").unwrap()
    }

    #[test]
    fn single_entry_view() {
        let g = path(2);
        let view = GroundedView::new(&g, &pins(&g, &[0])).unwrap();
        assert_eq!(view.unpinned(), &[1]);
        assert_eq!(view.to_dense(), dmatrix![1.0]);
    }

    #[test]
    fn triangle_minus_one_node() {
        let g = complete(3);
        let view = GroundedView::new(&g, &pins(&g, &[0])).unwrap();
        assert_eq!(view.unpinned(), &[1, 2]);
        assert_eq!(view.to_dense(), dmatrix![2.0, -1.0; -1.0, 2.0]);
    }

    #[test]
    fn star_with_leaf_pinned() {
        let g = star(4);
        let view = GroundedView::new(&g, &pins(&g, &[1])).unwrap();
        assert_eq!(view.unpinned(), &[0, 2, 3]);
        assert_eq!(view.to_dense(), dmatrix![3.0, -1.0, -1.0; -1.0, 1.0, 0.0; -1.0, 0.0, 1.0]);
    }

    #[test]
    fn all_pinned_is_an_error() {
        let g = path(2);
        assert!(matches!(GroundedView::new(&g, &pins(&g, &[0, 1])), Err(Error::EmptyView)));
    }

    #[test]
    fn matvec_matches_dense_definition() {
        let g = two_triangles();
        let view = GroundedView::new(&g, &pins(&g, &[1, 4])).unwrap();
        let dense = g.dense_laplacian();
        let keep = view.unpinned().to_vec();
        let x: Vec<f64> = (0..view.dim()).map(|i| (i as f64 * 0.7).sin()).collect();
        let mut y = vec![0.0; view.dim()];
        view.matvec(&x, &mut y);
        for (a, &va) in keep.iter().enumerate() {
            let expect: f64 = keep.iter().enumerate().map(|(b, &vb)| dense[(va, vb)] * x[b]).sum();
            assert!((y[a] - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn components_of_path_with_center_pinned() {
        let g = path(3);
        let comps = unpinned_components(&g, &pins(&g, &[1]));
        assert_eq!(
            comps,
            vec![
                UnpinnedComponent { nodes: vec![0], touches_pinned: true },
                UnpinnedComponent { nodes: vec![2], touches_pinned: true },
            ]
        );
    }

    #[test]
    fn untouched_component_detected() {
        let g = two_triangles();
        let p = pins(&g, &[0]);
        let comps = unpinned_components(&g, &p);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].nodes, vec![1, 2]);
        assert!(comps[0].touches_pinned);
        assert_eq!(comps[1].nodes, vec![3, 4, 5]);
        assert!(!comps[1].touches_pinned);
        let view = GroundedView::new(&g, &p).unwrap();
        assert_eq!(view.ungrounded_component(), Some(1));
    }

    #[test]
    fn nothing_pinned_single_component() {
        let g = complete(3);
        let comps = unpinned_components(&g, &PinSet::empty("none"));
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].nodes, vec![0, 1, 2]);
        assert!(!comps[0].touches_pinned);
    }
}
