//! Shifted inverse power iteration with preconditioned conjugate-gradient solves.

use super::operator::Operator;
use super::Outcome;
use crate::error::{Error, Result};

pub(crate) const SHIFT: f64 = 1e-9;
const INNER_RTOL: f64 = 1e-13;

/// Solves `(L_hat + shift I) y = b` by Jacobi-preconditioned CG; returns inner iterations.
fn pcg(op: &Operator<'_>, b: &[f64], y: &mut [f64], shift: f64, max_iter: usize) -> usize {
    let mut r = b.to_vec();
    // y starts at zero
    for &i in op.active() {
        y[i] = 0.0;
    }
    let inv_diag = |i: usize| 1.0 / (op.diag(i) + shift);
    let mut z = op.zeros();
    for &i in op.active() {
        z[i] = r[i] * inv_diag(i);
    }
    let mut p = z.clone();
    let mut ap = op.zeros();
    let mut rz = op.dot(&r, &z);
    let stop = INNER_RTOL * op.norm(b);
    for it in 0..max_iter {
        if op.norm(&r) <= stop {
            return it;
        }
        op.apply(&p, &mut ap);
        op.axpy(shift, &p, &mut ap);
        let alpha = rz / op.dot(&p, &ap);
        op.axpy(alpha, &p, y);
        op.axpy(-alpha, &ap, &mut r);
        for &i in op.active() {
            z[i] = r[i] * inv_diag(i);
        }
        let rz_next = op.dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for &i in op.active() {
            p[i] = z[i] + beta * p[i];
        }
    }
    max_iter
}

pub(crate) fn solve(
    op: &Operator<'_>,
    x0: Vec<f64>,
    tol: f64,
    max_iter: usize,
    abandon_below: Option<f64>,
) -> Result<Outcome> {
    let mut x = x0;
    let nrm = op.norm(&x);
    op.scale(1.0 / nrm, &mut x);
    let mut ax = op.zeros();
    let mut y = op.zeros();
    let mut r = op.zeros();
    let inner_cap = 10 * op.dim().max(10);
    let mut theta = f64::INFINITY;
    let mut residual = f64::INFINITY;
    for iter in 0..=max_iter {
        op.apply(&x, &mut ax);
        theta = op.dot(&x, &ax);
        residual = op.residual(&x, &ax, theta, &mut r);
        if residual <= tol {
            return Ok(Outcome::Converged { lambda: theta, x, residual, iterations: iter });
        }
        if let Some(bound) = abandon_below {
            if theta < bound {
                return Ok(Outcome::Abandoned);
            }
        }
        if iter == max_iter {
            break;
        }
        pcg(op, &x, &mut y, SHIFT, inner_cap);
        let n = op.norm(&y);
        if n == 0.0 || !n.is_finite() {
            break;
        }
        for &i in op.active() {
            x[i] = y[i] / n;
        }
    }
    Err(Error::NoConvergence { lambda1: theta, residual, iterations: max_iter, best: x })
}
