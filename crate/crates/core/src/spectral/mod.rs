//! Smallest eigenpair of a grounded Laplacian view, plus a dense oracle.
//!
//! The iterative path is matrix-free and warm-startable, which is what the
//! greedy strategies lean on: consecutive views differ by one node, so the
//! previous eigenvector is an excellent start. When a connected component of
//! the graph holds no pin, `lambda1` is exactly zero; that case is detected
//! structurally and never handed to the iteration.

mod inverse;
mod lobpcg;
pub(crate) mod operator;

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GroundedView};
use operator::Operator;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DENSE_CAP: usize = 2000;
const WARM_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenMethod {
    /// Locally optimal block preconditioned conjugate gradient (block size 1).
    #[default]
    Lobpcg,
    /// Inverse power iteration with a tiny shift and CG inner solves.
    InverseIteration,
}

impl fmt::Display for EigenMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EigenMethod::Lobpcg => "lobpcg",
            EigenMethod::InverseIteration => "inverse-iteration",
        })
    }
}

impl FromStr for EigenMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lobpcg" => Ok(EigenMethod::Lobpcg),
            "inverse-iteration" | "inverse" => Ok(EigenMethod::InverseIteration),
            other => Err(Error::InvalidParameter(format!("unknown eigen method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Bound on `||L_hat u - lambda1 u||_2`.
    pub tol: f64,
    /// Iteration cap. `None` means the larger of 1000 and ten times the node
    /// count for LOBPCG, and a hundred times the node count for inverse
    /// iteration, whose error only shrinks by `lambda1 / lambda2` per step.
    pub max_iter: Option<usize>,
    pub method: EigenMethod,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: DEFAULT_TOL, max_iter: None, method: EigenMethod::default() }
    }
}

impl SolverOptions {
    fn cap(&self, n: usize) -> usize {
        self.max_iter.unwrap_or(match self.method {
            EigenMethod::Lobpcg => (10 * n).max(1000),
            EigenMethod::InverseIteration => (100 * n).max(1000),
        })
    }
}

/// Smallest eigenvalue of a grounded view with its unit eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPair {
    pub lambda1: f64,
    /// Local coordinates: `u[i]` belongs to `view.unpinned()[i]`.
    pub u: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

pub fn smallest_eigenpair(view: &GroundedView<'_>, opts: &SolverOptions) -> Result<SpectralPair> {
    smallest_eigenpair_warm(view, opts, None)
}

/// Like [`smallest_eigenpair`], starting from `warm` (parent-indexed, any scale).
pub fn smallest_eigenpair_warm(
    view: &GroundedView<'_>,
    opts: &SolverOptions,
    warm: Option<&[f64]>,
) -> Result<SpectralPair> {
    let sol = solve_padded(view.graph(), view.unpinned(), view.ungrounded_component(), warm, opts)?;
    Ok(SpectralPair {
        lambda1: sol.lambda1,
        u: view.gather(&sol.x),
        residual: sol.residual,
        iterations: sol.iterations,
    })
}

/// Eigenpair on parent indexing, zero on pinned slots.
#[derive(Debug, Clone)]
pub(crate) struct PaddedPair {
    pub lambda1: f64,
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

pub(crate) enum Outcome {
    Converged {
        lambda: f64,
        x: Vec<f64>,
        residual: f64,
        iterations: usize,
    },
    /// The Rayleigh quotient (an upper bound on `lambda1`) fell below the caller's bound.
    Abandoned,
}

pub(crate) fn solve_padded(
    graph: &Graph,
    active: &[usize],
    ungrounded: Option<usize>,
    warm: Option<&[f64]>,
    opts: &SolverOptions,
) -> Result<PaddedPair> {
    match solve_bounded(graph, active, ungrounded, warm, opts, None)? {
        Outcome::Converged { lambda, x, residual, iterations } => {
            Ok(PaddedPair { lambda1: lambda, x, residual, iterations })
        }
        Outcome::Abandoned => unreachable!("no bound was given"),
    }
}

/// Solves, giving up early once the Rayleigh quotient drops below `abandon_below`.
pub(crate) fn solve_bounded(
    graph: &Graph,
    active: &[usize],
    ungrounded: Option<usize>,
    warm: Option<&[f64]>,
    opts: &SolverOptions,
    abandon_below: Option<f64>,
) -> Result<Outcome> {
    if active.is_empty() {
        return Err(Error::EmptyView);
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if let Some(component) = ungrounded {
        let mut x = vec![0.0; graph.node_count()];
        let members: Vec<usize> = active.iter().copied().filter(|&v| graph.component_of(v) == component).collect();
        let value = 1.0 / (members.len() as f64).sqrt();
        for v in members {
            x[v] = value;
        }
        if let Some(bound) = abandon_below {
            if 0.0 < bound {
                return Ok(Outcome::Abandoned);
            }
        }
        return Ok(Outcome::Converged { lambda: 0.0, x, residual: 0.0, iterations: 0 });
    }

    // The view is block diagonal over its connected pieces. Solving them
    // separately keeps a start vector concentrated on one piece from having
    // to crawl across a small gap to the piece that holds the minimum.
    let cap = opts.cap(graph.node_count());
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    let mut iterations = 0;
    for block in blocks(graph, active) {
        let op = Operator::new(graph, &block);
        let x0 = op.start_vector(warm, WARM_FLOOR);
        let outcome = match opts.method {
            // a warm start can stall on a clustered spectrum; retry cold, then
            // finish off with inverse iteration from the best vector seen
            EigenMethod::Lobpcg => match lobpcg::solve(&op, x0, opts.tol, cap, abandon_below) {
                Err(Error::NoConvergence { .. }) if warm.is_some() => {
                    match lobpcg::solve(&op, op.start_vector(None, WARM_FLOOR), opts.tol, cap, abandon_below) {
                        Err(Error::NoConvergence { best, .. }) => {
                            inverse::solve(&op, best, opts.tol, cap, abandon_below)?
                        }
                        other => other?,
                    }
                }
                Err(Error::NoConvergence { best, .. }) => inverse::solve(&op, best, opts.tol, cap, abandon_below)?,
                other => other?,
            },
            EigenMethod::InverseIteration => inverse::solve(&op, x0, opts.tol, cap, abandon_below)?,
        };
        match outcome {
            Outcome::Converged { lambda, x, residual, iterations: it } => {
                iterations += it;
                if best.as_ref().is_none_or(|b| lambda < b.0) {
                    best = Some((lambda, x, residual));
                }
            }
            Outcome::Abandoned => return Ok(Outcome::Abandoned),
        }
    }
    let (lambda, mut x, residual) = best.expect("active is not empty");
    apply_sign_convention(active, &mut x);
    Ok(Outcome::Converged { lambda, x, residual, iterations })
}

/// Connected pieces of the subgraph induced on `active`, each sorted, ordered
/// by smallest node.
fn blocks(graph: &Graph, active: &[usize]) -> Vec<Vec<usize>> {
    let mut free = vec![false; graph.node_count()];
    for &i in active {
        free[i] = true;
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for &start in active {
        if !free[start] {
            continue;
        }
        free[start] = false;
        stack.push(start);
        let mut block = Vec::new();
        while let Some(v) = stack.pop() {
            block.push(v);
            for &w in graph.neighbors(v) {
                if free[w] {
                    free[w] = false;
                    stack.push(w);
                }
            }
        }
        block.sort_unstable();
        out.push(block);
    }
    out
}

/// Flips `x` so its entries sum to a nonnegative value; on a zero sum the
/// first nonzero entry is made positive.
fn apply_sign_convention(active: &[usize], x: &mut [f64]) {
    let sum: f64 = active.iter().map(|&i| x[i]).sum();
    let flip =
        if sum != 0.0 { sum < 0.0 } else { active.iter().map(|&i| x[i]).find(|&v| v != 0.0).is_some_and(|v| v < 0.0) };
    if flip {
        for &i in active {
            x[i] = -x[i];
        }
    }
}

/// Full spectrum of a small view, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct DenseSpectrum {
    pub values: Vec<f64>,
    /// Column `h` is the unit eigenvector for `values[h]`, in local coordinates.
    pub vectors: DMatrix<f64>,
}

pub fn dense_spectrum_oracle(view: &GroundedView<'_>) -> Result<DenseSpectrum> {
    let dim = view.dim();
    if dim > DENSE_CAP {
        return Err(Error::DimensionTooLarge { dim, cap: DENSE_CAP });
    }
    let eig = SymmetricEigen::new(view.to_dense());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(dim, dim);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok(DenseSpectrum { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::PinSet;
    use approx::assert_abs_diff_eq;

    fn view<'g>(g: &'g Graph, pins: &[usize]) -> GroundedView<'g> {
        GroundedView::new(g, &PinSet::new(g, pins.to_vec(), "test").unwrap()).unwrap()
    }

    fn both_methods() -> [SolverOptions; 2] {
        [SolverOptions::default(), SolverOptions { method: EigenMethod::InverseIteration, ..Default::default() }]
    }

    #[test]
    fn triangle_minus_one() {
        let g = complete(3);
        for opts in both_methods() {
            let pair = smallest_eigenpair(&view(&g, &[0]), &opts).unwrap();
            assert_abs_diff_eq!(pair.lambda1, 1.0, epsilon = 1e-12);
            let h = std::f64::consts::FRAC_1_SQRT_2;
            assert_abs_diff_eq!(pair.u[0], h, epsilon = 1e-9);
            assert_abs_diff_eq!(pair.u[1], h, epsilon = 1e-9);
            assert!(pair.residual <= DEFAULT_TOL);
        }
    }

    #[test]
    fn star_with_leaf_pinned() {
        // lambda^2 - 4 lambda + 1 = 0 on the 3x3 view
        let g = star(4);
        for opts in both_methods() {
            let pair = smallest_eigenpair(&view(&g, &[1]), &opts).unwrap();
            assert_abs_diff_eq!(pair.lambda1, 2.0 - 3f64.sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn untouched_component_gives_zero() {
        let g = two_triangles();
        let v = view(&g, &[0]);
        let pair = smallest_eigenpair(&v, &SolverOptions::default()).unwrap();
        assert_eq!(pair.lambda1, 0.0);
        let third = 1.0 / 3f64.sqrt();
        assert_eq!(v.unpinned(), &[1, 2, 3, 4, 5]);
        assert_eq!(pair.u, vec![0.0, 0.0, third, third, third]);
        assert_eq!(pair.residual, 0.0);
    }

    #[test]
    fn dense_oracle_examples() {
        let g = complete(3);
        let s = dense_spectrum_oracle(&view(&g, &[0])).unwrap();
        assert_abs_diff_eq!(s.values[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.values[1], 3.0, epsilon = 1e-12);

        let p3 = path(3);
        let s = dense_spectrum_oracle(&view(&p3, &[1])).unwrap();
        assert_abs_diff_eq!(s.values[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.values[1], 1.0, epsilon = 1e-12);

        let s = dense_spectrum_oracle(&view(&p3, &[0])).unwrap();
        assert_abs_diff_eq!(s.values[0], (3.0 - 5f64.sqrt()) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.values[1], (3.0 + 5f64.sqrt()) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn dense_oracle_cap() {
        let g = path(DENSE_CAP + 2);
        assert!(matches!(dense_spectrum_oracle(&view(&g, &[0])), Err(Error::DimensionTooLarge { .. })));
    }

    #[test]
    fn sign_convention_and_perron() {
        let g = path(6);
        let pair = smallest_eigenpair(&view(&g, &[2]), &SolverOptions::default()).unwrap();
        // two unpinned pieces, both grounded; the smaller block is {0, 1}
        assert!(pair.u.iter().sum::<f64>() >= 0.0);
        let pair = smallest_eigenpair(&view(&g, &[0]), &SolverOptions::default()).unwrap();
        assert!(pair.u.iter().all(|&x| x > 0.0));
        assert_abs_diff_eq!(pair.u.iter().map(|x| x * x).sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn nonconvergence_reports_best_iterate() {
        let g = path(40);
        let opts = SolverOptions { max_iter: Some(1), ..Default::default() };
        match smallest_eigenpair(&view(&g, &[0]), &opts) {
            Err(Error::NoConvergence { best, residual, .. }) => {
                assert_eq!(best.len(), 40);
                assert!(residual > DEFAULT_TOL);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn zero_tolerance_rejected() {
        let g = path(3);
        let opts = SolverOptions { tol: 0.0, ..Default::default() };
        assert!(smallest_eigenpair(&view(&g, &[0]), &opts).is_err());
    }
}
