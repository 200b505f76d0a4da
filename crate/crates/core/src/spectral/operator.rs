//! Matrix-free grounded Laplacian on parent-indexed ("padded") vectors.
//!
//! Vectors have one slot per graph node. Slots of pinned nodes are kept at
//! zero, so the product needs no membership test in its inner loop. All
//! vector kernels iterate over the active (unpinned) list only.

use crate::graph::Graph;

pub(crate) struct Operator<'a> {
    graph: &'a Graph,
    active: &'a [usize],
}

impl<'a> Operator<'a> {
    pub fn new(graph: &'a Graph, active: &'a [usize]) -> Self {
        Operator { graph, active }
    }

    pub fn active(&self) -> &'a [usize] {
        self.active
    }

    pub fn dim(&self) -> usize {
        self.active.len()
    }

    pub fn full_len(&self) -> usize {
        self.graph.node_count()
    }

    /// `y = L_hat x`. Requires `x` to vanish on pinned slots.
    #[inline]
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for &i in self.active {
            let mut acc = self.graph.degree(i) as f64 * x[i];
            for &j in self.graph.neighbors(i) {
                acc -= x[j];
            }
            y[i] = acc;
        }
    }

    #[inline]
    pub fn diag(&self, i: usize) -> f64 {
        self.graph.degree(i) as f64
    }

    #[inline]
    pub fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        self.active.iter().map(|&i| a[i] * b[i]).sum()
    }

    #[inline]
    pub fn norm(&self, a: &[f64]) -> f64 {
        self.dot(a, a).sqrt()
    }

    /// `y += alpha x`
    #[inline]
    pub fn axpy(&self, alpha: f64, x: &[f64], y: &mut [f64]) {
        for &i in self.active {
            y[i] += alpha * x[i];
        }
    }

    #[inline]
    pub fn scale(&self, alpha: f64, x: &mut [f64]) {
        for &i in self.active {
            x[i] *= alpha;
        }
    }

    pub fn zeros(&self) -> Vec<f64> {
        vec![0.0; self.full_len()]
    }

    /// `r = ax - theta x`, returns `||r||`.
    pub fn residual(&self, x: &[f64], ax: &[f64], theta: f64, r: &mut [f64]) -> f64 {
        let mut s = 0.0;
        for &i in self.active {
            let v = ax[i] - theta * x[i];
            r[i] = v;
            s += v * v;
        }
        s.sqrt()
    }

    /// Positive start vector `|warm| + eta / sqrt(n)`, normalized.
    ///
    /// The floor keeps every entry positive, so a warm vector that vanishes
    /// somewhere still overlaps the positive eigenvector of a connected block.
    pub fn start_vector(&self, warm: Option<&[f64]>, eta: f64) -> Vec<f64> {
        let mut x = self.zeros();
        let floor = 1.0 / (self.dim() as f64).sqrt();
        match warm {
            Some(w) => {
                let norm = self.norm(w);
                let scale = if norm > 0.0 && norm.is_finite() { 1.0 / norm } else { 0.0 };
                for &i in self.active {
                    x[i] = w[i].abs() * scale + eta * floor;
                }
            }
            None => {
                for &i in self.active {
                    x[i] = floor;
                }
            }
        }
        let n = self.norm(&x);
        self.scale(1.0 / n, &mut x);
        x
    }
}
