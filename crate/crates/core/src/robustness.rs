//! Random failures of pinned controllers.
//!
//! A failed pin rejoins the unpinned set, so the effective grounded view is
//! the one of the surviving pins alone.

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::dynamics::FailureMask;
use crate::error::{Error, Result};
use crate::graph::{Graph, PinSet};
use crate::rng;
use crate::spectral::{solve_padded, SolverOptions};
use crate::strategies::{select, SelectOptions, SelectionTrace, StrategyKind};

/// Number of failed pins for `ratio` of `pins`, rounded half up.
pub fn failure_count(pins: usize, ratio: f64) -> usize {
    ((ratio * pins as f64 + 0.5 + 1e-9).floor() as usize).min(pins)
}

/// Fails `round(ratio * |pins|)` pins chosen uniformly at random.
///
/// The pins are shuffled once per seed and the first entries fail, so with a
/// fixed seed the failed set only grows as `ratio` grows.
pub fn apply_failures(pins: &PinSet, ratio: f64, seed: u64) -> Result<FailureMask> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::InvalidParameter(format!("failure ratio {ratio} outside [0, 1]")));
    }
    let len = pins.len();
    let mut order: Vec<usize> = (0..len).collect();
    order.shuffle(&mut rng::stream(seed, "failures", &[]));
    let mut mask = FailureMask::none(len);
    for &j in &order[..failure_count(len, ratio)] {
        mask.beta[j] = true;
    }
    Ok(mask)
}

/// `lambda1` of the grounded view over the surviving pins only.
pub fn effective_lambda1(graph: &Graph, pins: &PinSet, mask: &FailureMask, opts: &SolverOptions) -> Result<f64> {
    effective_lambda1_warm(graph, pins, mask, opts, None)
}

fn effective_lambda1_warm(
    graph: &Graph,
    pins: &PinSet,
    mask: &FailureMask,
    opts: &SolverOptions,
    warm: Option<&[f64]>,
) -> Result<f64> {
    let pins = PinSet::new(graph, pins.members().to_vec(), pins.origin())?;
    let surviving = mask.surviving(&pins)?;
    let n = graph.node_count();
    let pinned = surviving.mask(n);
    let active: Vec<usize> = (0..n).filter(|&v| !pinned[v]).collect();
    let mut has_pin = vec![false; graph.component_count()];
    for &v in surviving.members() {
        has_pin[graph.component_of(v)] = true;
    }
    let ungrounded = has_pin.iter().position(|&p| !p);
    Ok(solve_padded(graph, &active, ungrounded, warm, opts)?.lambda1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessRow {
    pub k: usize,
    pub failure_ratio: f64,
    pub lambda1_mean: f64,
    /// Population standard deviation over trials.
    pub lambda1_std: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessCurve {
    pub strategy: StrategyKind,
    pub rows: Vec<RobustnessRow>,
}

/// Runs `strategy` once for the largest `k` and sweeps failures on its prefixes.
pub fn robustness_curve(
    graph: &Graph,
    strategy: StrategyKind,
    k_list: &[usize],
    ratios: &[f64],
    trials: usize,
    seed: u64,
    opts: &SelectOptions,
) -> Result<RobustnessCurve> {
    let k_max = k_list.iter().copied().max().ok_or_else(|| Error::InvalidParameter("empty k list".into()))?;
    let trace = select(graph, strategy, k_max, opts)?;
    robustness_from_trace(graph, &trace, k_list, ratios, trials, seed, &opts.solver)
}

/// Failure sweep over prefixes of an existing trace.
///
/// Trial `t` at budget `k` shuffles with the seed stream `("failures", [k, t])`,
/// shared by every ratio.
pub fn robustness_from_trace(
    graph: &Graph,
    trace: &SelectionTrace,
    k_list: &[usize],
    ratios: &[f64],
    trials: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<RobustnessCurve> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(k_list.len() * ratios.len());
    for &k in k_list {
        if k == 0 || k > trace.steps.len() {
            return Err(Error::InvalidBudget { k, n: graph.node_count() });
        }
        let pins = trace.prefix(k).pins();
        let baseline = {
            let mask = FailureMask::none(k);
            let surviving = mask.surviving(&pins)?;
            let view = crate::graph::GroundedView::new(graph, &surviving)?;
            view.scatter(&crate::spectral::smallest_eigenpair(&view, opts)?.u)
        };
        for &ratio in ratios {
            let values: Vec<f64> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let trial_seed = rng::derive_seed(seed, "failures", &[k as u64, t as u64]);
                    let mask = apply_failures(&pins, ratio, trial_seed)?;
                    effective_lambda1_warm(graph, &pins, &mask, opts, Some(&baseline))
                })
                .collect::<Result<_>>()?;
            let (mean, std) = mean_std(&values);
            rows.push(RobustnessRow { k, failure_ratio: ratio, lambda1_mean: mean, lambda1_std: std, trials });
        }
    }
    Ok(RobustnessCurve { strategy: trace.strategy, rows })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use approx::assert_abs_diff_eq;

    fn pins(g: &Graph, m: &[usize]) -> PinSet {
        PinSet::new(g, m.to_vec(), "t").unwrap()
    }

    #[test]
    fn failure_counts() {
        let g = path(12);
        let p = pins(&g, &(0..10).collect::<Vec<_>>());
        assert_eq!(apply_failures(&p, 0.0, 1).unwrap().failed_count(), 0);
        assert_eq!(apply_failures(&p, 1.0, 1).unwrap().failed_count(), 10);
        assert_eq!(apply_failures(&p, 0.3, 1).unwrap().failed_count(), 3);
        assert_eq!(failure_count(5, 0.1), 1);
        assert_eq!(failure_count(5, 0.3), 2);
        assert!(apply_failures(&p, 1.5, 1).is_err());
    }

    #[test]
    fn failures_nest_across_ratios() {
        let g = path(30);
        let p = pins(&g, &(0..20).collect::<Vec<_>>());
        let a = apply_failures(&p, 0.1, 9).unwrap();
        let b = apply_failures(&p, 0.3, 9).unwrap();
        assert!(a.beta.iter().zip(&b.beta).all(|(&x, &y)| !x || y));
        assert_eq!(a, apply_failures(&p, 0.1, 9).unwrap());
    }

    #[test]
    fn effective_lambda_examples() {
        let opts = SolverOptions::default();
        let g = complete(3);
        let p = pins(&g, &[0, 1]);
        let mask = FailureMask { beta: vec![false, true] };
        assert_abs_diff_eq!(effective_lambda1(&g, &p, &mask, &opts).unwrap(), 1.0, epsilon = 1e-10);
        assert_eq!(effective_lambda1(&g, &p, &FailureMask::all(2), &opts).unwrap(), 0.0);
        let none = effective_lambda1(&g, &p, &FailureMask::none(2), &opts).unwrap();
        assert_abs_diff_eq!(none, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn zero_ratio_and_single_trial_have_no_spread() {
        let g = crate::generators::gen_er(60, 0.1, 4).unwrap();
        let opts = SelectOptions::default();
        let curve = robustness_curve(&g, StrategyKind::Pbo, &[5, 10], &[0.0, 0.2], 5, 1, &opts).unwrap();
        for row in curve.rows.iter().filter(|r| r.failure_ratio == 0.0) {
            assert_eq!(row.lambda1_std, 0.0);
        }
        let single = robustness_curve(&g, StrategyKind::Pbo, &[10], &[0.2], 1, 1, &opts).unwrap();
        assert_eq!(single.rows[0].lambda1_std, 0.0);
    }
}
