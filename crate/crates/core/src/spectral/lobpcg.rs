//! Single-vector LOBPCG with Jacobi (degree) preconditioning.
//!
//! Each iteration performs one product with the operator: the trial basis
//! `[x, p, w]` is orthonormalized explicitly and its image under the operator
//! is carried along by the same linear combinations. The carried image drifts
//! by rounding, so it is refreshed periodically and always before accepting
//! convergence.

use super::operator::Operator;
use super::Outcome;
use crate::error::{Error, Result};

const REFRESH_EVERY: usize = 16;
/// Relative norm under which an orthogonalized direction counts as dependent.
const DEPENDENT: f64 = 1e-10;
/// Iterations without any decrease of the Rayleigh quotient before giving up.
/// The residual is not monotone on clustered spectra, the quotient is.
const STALL: usize = 500;

struct Direction {
    v: Vec<f64>,
    av: Vec<f64>,
}

/// Removes from `(v, av)` its components along each basis direction, twice.
/// Returns false if nothing independent remains.
fn orthonormalize(op: &Operator<'_>, dir: &mut Direction, basis: &[&Direction]) -> bool {
    let start = op.norm(&dir.v);
    if start == 0.0 || !start.is_finite() {
        return false;
    }
    for _ in 0..2 {
        for b in basis {
            let c = op.dot(&b.v, &dir.v);
            op.axpy(-c, &b.v, &mut dir.v);
            op.axpy(-c, &b.av, &mut dir.av);
        }
    }
    let end = op.norm(&dir.v);
    if end <= DEPENDENT * start {
        return false;
    }
    op.scale(1.0 / end, &mut dir.v);
    op.scale(1.0 / end, &mut dir.av);
    true
}

pub(crate) fn solve(
    op: &Operator<'_>,
    x0: Vec<f64>,
    tol: f64,
    max_iter: usize,
    abandon_below: Option<f64>,
) -> Result<Outcome> {
    let mut x = Direction { av: op.zeros(), v: x0 };
    let norm = op.norm(&x.v);
    op.scale(1.0 / norm, &mut x.v);
    op.apply(&x.v, &mut x.av);
    let mut theta = op.dot(&x.v, &x.av);

    let mut p: Option<Direction> = None;
    let mut r = op.zeros();
    let mut residual = f64::INFINITY;
    let (mut lowest, mut improved_at) = (f64::INFINITY, 0);
    let mut done = 0;

    for iter in 0..=max_iter {
        done = iter;
        if iter > 0 && iter % REFRESH_EVERY == 0 {
            op.apply(&x.v, &mut x.av);
            theta = op.dot(&x.v, &x.av);
        }
        residual = op.residual(&x.v, &x.av, theta, &mut r);
        if residual <= tol {
            // confirm against a fresh product
            op.apply(&x.v, &mut x.av);
            theta = op.dot(&x.v, &x.av);
            residual = op.residual(&x.v, &x.av, theta, &mut r);
            if residual <= tol {
                return Ok(Outcome::Converged { lambda: theta, x: x.v, residual, iterations: iter });
            }
        }
        if let Some(bound) = abandon_below {
            if theta < bound {
                return Ok(Outcome::Abandoned);
            }
        }
        if theta < lowest - 4.0 * f64::EPSILON * theta.abs() {
            (lowest, improved_at) = (theta, iter);
        }
        if iter == max_iter || iter - improved_at > STALL {
            break;
        }

        let mut w = Direction { v: op.zeros(), av: op.zeros() };
        for &i in op.active() {
            w.v[i] = r[i] / op.diag(i).max(1.0);
        }

        let mut basis: Vec<Direction> = Vec::with_capacity(3);
        let p_kept = p.take().and_then(|mut d| orthonormalize(op, &mut d, &[&x]).then_some(d));
        // w's image is computed after orthogonalization, so start it from zero
        let w_kept = {
            let mut refs: Vec<&Direction> = vec![&x];
            if let Some(d) = &p_kept {
                refs.push(d);
            }
            if orthonormalize(op, &mut w, &refs) {
                op.apply(&w.v, &mut w.av);
                Some(w)
            } else {
                None
            }
        };
        let Some(w) = w_kept else {
            // residual has no independent direction left; nothing more to gain
            break;
        };
        basis.push(x);
        if let Some(d) = p_kept {
            basis.push(d);
        }
        basis.push(w);

        let m = basis.len();
        let mut gram = [[0.0f64; 3]; 3];
        for a in 0..m {
            for b in a..m {
                let g = 0.5 * (op.dot(&basis[a].v, &basis[b].av) + op.dot(&basis[b].v, &basis[a].av));
                gram[a][b] = g;
                gram[b][a] = g;
            }
        }
        let (new_theta, y) = smallest_of_small(gram, m);

        let mut nx = Direction { v: op.zeros(), av: op.zeros() };
        let mut np = Direction { v: op.zeros(), av: op.zeros() };
        for (j, dir) in basis.iter().enumerate() {
            op.axpy(y[j], &dir.v, &mut nx.v);
            op.axpy(y[j], &dir.av, &mut nx.av);
            if j > 0 {
                op.axpy(y[j], &dir.v, &mut np.v);
                op.axpy(y[j], &dir.av, &mut np.av);
            }
        }
        let nrm = op.norm(&nx.v);
        op.scale(1.0 / nrm, &mut nx.v);
        op.scale(1.0 / nrm, &mut nx.av);
        x = nx;
        p = Some(np);
        theta = new_theta;
    }

    op.apply(&x.v, &mut x.av);
    theta = op.dot(&x.v, &x.av);
    let final_residual = op.residual(&x.v, &x.av, theta, &mut r);
    if final_residual <= tol {
        return Ok(Outcome::Converged { lambda: theta, x: x.v, residual: final_residual, iterations: done });
    }
    Err(Error::NoConvergence { lambda1: theta, residual: final_residual.min(residual), iterations: done, best: x.v })
}

/// Smallest eigenpair of the leading `m x m` block of a symmetric matrix by
/// cyclic Jacobi rotations, which keep small eigenvector components accurate.
fn smallest_of_small(mut a: [[f64; 3]; 3], m: usize) -> (f64, [f64; 3]) {
    let mut v = [[0.0f64; 3]; 3];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..50 {
        let mut off = 0.0;
        for p in 0..m {
            for q in p + 1..m {
                off += a[p][q] * a[p][q];
            }
        }
        if off == 0.0 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if a[p][q] == 0.0 {
                    continue;
                }
                let tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut().take(m) {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let imin = (0..m).min_by(|&i, &j| a[i][i].total_cmp(&a[j][j])).unwrap_or(0);
    let mut y = [0.0; 3];
    for (k, yk) in y.iter_mut().enumerate().take(m) {
        *yk = v[k][imin];
    }
    (a[imin][imin], y)
}
