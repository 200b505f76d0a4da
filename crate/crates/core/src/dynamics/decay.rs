use crate::error::{Error, Result};
use crate::graph::{Graph, GroundedView, PinSet};

/// RK4 steps across the fit window, unless stability asks for more.
const WINDOW_STEPS: usize = 2000;

/// Fits the decay rate of `||xi(t)||^2` under `xi' = -c L_hat xi`.
///
/// `u_init` is in local coordinates of the grounded view of `pins`. Pinned
/// states stay at zero. The fit is least squares on `log ||xi||^2` over
/// `[0, 3 / (2 c mu)]`, where `mu` is the Rayleigh quotient of `u_init`, so an
/// eigenvector for `lambda_h` is fitted over three of its own e-foldings and
/// should return `2 c lambda_h`.
pub fn measure_decay_rate(graph: &Graph, pins: &PinSet, c: f64, u_init: &[f64]) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("coupling must be positive, got {c}")));
    }
    let view = GroundedView::new(graph, pins)?;
    if !view.is_grounded() {
        return Err(Error::Ungrounded);
    }
    if u_init.len() != view.dim() {
        return Err(Error::InvalidParameter(format!(
            "initial vector has {} entries for a view of dimension {}",
            u_init.len(),
            view.dim()
        )));
    }
    let norm2: f64 = u_init.iter().map(|v| v * v).sum();
    if !(norm2 > 0.0) {
        return Err(Error::InvalidParameter("initial vector is zero".into()));
    }
    let mu = view.quadratic_form(u_init) / norm2;
    if !(mu > 0.0) {
        return Err(Error::Ungrounded);
    }

    let window = 3.0 / (2.0 * c * mu);
    // RK4 is stable for h * rho < 2.78; rho <= 2 * max degree
    let rho = c * 2.0 * graph.max_degree().max(1) as f64;
    let steps = WINDOW_STEPS.max((window * rho).ceil() as usize);
    let h = window / steps as f64;

    let dim = view.dim();
    let mut x = u_init.to_vec();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
    let mut tmp = vec![0.0; dim];
    let f = |x: &[f64], out: &mut [f64]| {
        view.matvec(x, out);
        for o in out.iter_mut() {
            *o *= -c;
        }
    };

    let mut ts = Vec::with_capacity(steps + 1);
    let mut ys = Vec::with_capacity(steps + 1);
    let log_norm2 = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().ln();
    ts.push(0.0);
    ys.push(log_norm2(&x));
    for j in 1..=steps {
        f(&x, &mut k1);
        for i in 0..dim {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        f(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        f(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = x[i] + h * k3[i];
        }
        f(&tmp, &mut k4);
        for i in 0..dim {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        ts.push(j as f64 * h);
        ys.push(log_norm2(&x));
    }
    Ok(-least_squares_slope(&ts, &ys))
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn triangle_rate() {
        let g = complete(3);
        let pins = PinSet::new(&g, vec![0], "t").unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rate = measure_decay_rate(&g, &pins, 1.0, &[h, h]).unwrap();
        assert!((rate - 2.0).abs() < 0.02 * 2.0, "{rate}");
        let doubled = measure_decay_rate(&g, &pins, 2.0, &[h, h]).unwrap();
        assert!((doubled / rate - 2.0).abs() < 1e-6);
    }

    #[test]
    fn ungrounded_view_rejected() {
        let g = two_triangles();
        let pins = PinSet::new(&g, vec![0], "t").unwrap();
        assert!(matches!(measure_decay_rate(&g, &pins, 1.0, &[1.0; 5]), Err(Error::Ungrounded)));
    }
}
