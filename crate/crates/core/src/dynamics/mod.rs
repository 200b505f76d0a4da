//! Pinned Chen oscillators and linear consensus decay.
//!
//! Every node carries a three-dimensional Chen oscillator. Nodes are coupled
//! diffusively through the graph Laplacian with strength `c`, and each pinned
//! node whose controller has not failed receives feedback `-c gain (x_i - s)`
//! toward the target `s`, which is the origin (an equilibrium of both Chen
//! variants). Integration is fixed-step RK4.

mod decay;

pub use decay::measure_decay_rate;

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, PinSet};
use crate::rng;

/// States beyond this magnitude count as numerical blow-up.
pub const DIVERGENCE_LIMIT: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChenVariant {
    /// `x2' = (p3 - p1) x1 - x1 x3 + p3 x2`
    #[default]
    Standard,
    /// `x2' = (p3 - p2) x2 - x1 x3 + p3 x2`
    Augmented,
}

impl fmt::Display for ChenVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChenVariant::Standard => "standard",
            ChenVariant::Augmented => "augmented",
        })
    }
}

impl FromStr for ChenVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(ChenVariant::Standard),
            "augmented" => Ok(ChenVariant::Augmented),
            other => Err(Error::InvalidParameter(format!("unknown Chen variant {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChenParams {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl Default for ChenParams {
    fn default() -> Self {
        ChenParams { p1: 35.0, p2: 3.0, p3: 28.0 }
    }
}

#[inline]
pub fn chen_rhs(x: [f64; 3], p: &ChenParams, variant: ChenVariant) -> [f64; 3] {
    let [x1, x2, x3] = x;
    let second = match variant {
        ChenVariant::Standard => (p.p3 - p.p1) * x1 - x1 * x3 + p.p3 * x2,
        ChenVariant::Augmented => (p.p3 - p.p2) * x2 - x1 * x3 + p.p3 * x2,
    };
    [p.p1 * (x2 - x1), second, x1 * x2 - p.p2 * x3]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsConfig {
    /// Coupling strength.
    pub c: f64,
    /// Control gain applied at every active pin.
    pub gain: f64,
    pub chen: ChenParams,
    pub chen_variant: ChenVariant,
    pub dt: f64,
    pub t_max: f64,
    /// Synchronization threshold on the largest node error.
    pub eps: f64,
    /// Initial states are uniform in `[-init_box, init_box]^3`.
    pub init_box: f64,
    pub seed: u64,
    /// Keep per-node errors every this many steps.
    pub sample_stride: Option<usize>,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        DynamicsConfig {
            c: 5.0,
            gain: 30.0,
            chen: ChenParams::default(),
            chen_variant: ChenVariant::Standard,
            dt: 1e-3,
            t_max: 5.0,
            eps: 1e-3,
            init_box: 1.0,
            seed: 0,
            sample_stride: None,
        }
    }
}

impl DynamicsConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [("c", self.c), ("gain", self.gain), ("dt", self.dt), ("eps", self.eps)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.t_max > self.dt) {
            return Err(Error::InvalidParameter(format!("t_max ({}) must exceed dt ({})", self.t_max, self.dt)));
        }
        if !(self.init_box >= 0.0) {
            return Err(Error::InvalidParameter(format!("init_box must be nonnegative, got {}", self.init_box)));
        }
        if self.sample_stride == Some(0) {
            return Err(Error::InvalidParameter("sample_stride must be at least 1".into()));
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }
}

/// Which pinned controllers have failed; `beta[j]` belongs to the `j`-th pin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureMask {
    pub beta: Vec<bool>,
}

impl FailureMask {
    pub fn none(len: usize) -> Self {
        FailureMask { beta: vec![false; len] }
    }

    pub fn all(len: usize) -> Self {
        FailureMask { beta: vec![true; len] }
    }

    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    pub fn failed_count(&self) -> usize {
        self.beta.iter().filter(|&&b| b).count()
    }

    /// Pins whose controller still works, in selection order.
    pub fn surviving(&self, pins: &PinSet) -> Result<PinSet> {
        self.check(pins)?;
        let members = pins.members().iter().zip(&self.beta).filter(|(_, &failed)| !failed).map(|(&v, _)| v).collect();
        Ok(PinSet::from_trusted(members, pins.origin()))
    }

    pub(crate) fn check(&self, pins: &PinSet) -> Result<()> {
        if self.beta.len() != pins.len() {
            return Err(Error::InvalidParameter(format!(
                "failure mask has {} entries for {} pins",
                self.beta.len(),
                pins.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    /// `||x_i - s||` per node.
    pub node_errors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySummary {
    /// First time after which the largest node error stays below `eps`
    /// through `t_max`; `None` if it never settles.
    pub sync_time: Option<f64>,
    pub final_error: f64,
    pub samples: Vec<Sample>,
}

/// Integrates the pinned network from a seeded random start.
pub fn simulate(graph: &Graph, pins: &PinSet, cfg: &DynamicsConfig, mask: &FailureMask) -> Result<TrajectorySummary> {
    cfg.validate()?;
    if pins.is_empty() {
        return Err(Error::InvalidPins("simulation needs at least one pin".into()));
    }
    let pins = PinSet::new(graph, pins.members().to_vec(), pins.origin())?;
    mask.check(&pins)?;

    let n = graph.node_count();
    let mut feedback = vec![0.0; n];
    for (&v, &failed) in pins.members().iter().zip(&mask.beta) {
        if !failed {
            feedback[v] = cfg.c * cfg.gain;
        }
    }

    let mut rng = rng::stream(cfg.seed, "initial-conditions", &[]);
    let mut x: Vec<f64> = (0..3 * n)
        .map(|_| if cfg.init_box > 0.0 { rng.gen_range(-cfg.init_box..=cfg.init_box) } else { 0.0 })
        .collect();

    let rhs = |x: &[f64], out: &mut [f64]| {
        for i in 0..n {
            let xi = [x[3 * i], x[3 * i + 1], x[3 * i + 2]];
            let mut f = chen_rhs(xi, &cfg.chen, cfg.chen_variant);
            let mut sum = [0.0; 3];
            for &j in graph.neighbors(i) {
                sum[0] += x[3 * j];
                sum[1] += x[3 * j + 1];
                sum[2] += x[3 * j + 2];
            }
            let d = graph.degree(i) as f64;
            for a in 0..3 {
                f[a] += cfg.c * (sum[a] - d * xi[a]) - feedback[i] * xi[a];
                out[3 * i + a] = f[a];
            }
        }
    };

    let steps = cfg.steps();
    let mut errors = Vec::with_capacity(steps + 1);
    let mut samples = Vec::new();
    let record = |x: &[f64], j: usize, errors: &mut Vec<f64>, samples: &mut Vec<Sample>| {
        let node_errors: Vec<f64> =
            x.chunks_exact(3).map(|s| (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt()).collect();
        errors.push(node_errors.iter().copied().fold(0.0, f64::max));
        if cfg.sample_stride.is_some_and(|stride| j.is_multiple_of(stride) || j == steps) {
            samples.push(Sample { t: j as f64 * cfg.dt, node_errors });
        }
    };
    record(&x, 0, &mut errors, &mut samples);

    let len = 3 * n;
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    let mut tmp = vec![0.0; len];
    let h = cfg.dt;
    for j in 1..=steps {
        rhs(&x, &mut k1);
        for i in 0..len {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        rhs(&tmp, &mut k2);
        for i in 0..len {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        rhs(&tmp, &mut k3);
        for i in 0..len {
            tmp[i] = x[i] + h * k3[i];
        }
        rhs(&tmp, &mut k4);
        let mut blown = false;
        for i in 0..len {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            blown |= !(x[i].abs() <= DIVERGENCE_LIMIT);
        }
        if blown {
            return Err(Error::Divergence { time: j as f64 * h });
        }
        record(&x, j, &mut errors, &mut samples);
    }

    Ok(TrajectorySummary {
        sync_time: sustained_crossing(&errors, cfg.eps).map(|j| j as f64 * h),
        final_error: *errors.last().expect("at least the initial error"),
        samples,
    })
}

/// Index from which every entry is below `eps`, if the last one is.
fn sustained_crossing(errors: &[f64], eps: f64) -> Option<usize> {
    match errors.iter().rposition(|&e| !(e < eps)) {
        None => Some(0),
        Some(j) if j + 1 < errors.len() => Some(j + 1),
        Some(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn chen_examples() {
        let p = ChenParams::default();
        for v in [ChenVariant::Standard, ChenVariant::Augmented] {
            assert_eq!(chen_rhs([0.0; 3], &p, v), [0.0; 3]);
        }
        assert_eq!(chen_rhs([1.0, 1.0, 1.0], &p, ChenVariant::Standard), [0.0, 20.0, -2.0]);
        assert_eq!(chen_rhs([0.0, 1.0, 0.0], &p, ChenVariant::Augmented), [35.0, 53.0, 0.0]);
    }

    #[test]
    fn sustained_rule() {
        assert_eq!(sustained_crossing(&[0.1, 0.1], 1.0), Some(0));
        assert_eq!(sustained_crossing(&[2.0, 0.5, 3.0, 0.5, 0.2], 1.0), Some(3));
        assert_eq!(sustained_crossing(&[2.0, 0.5, 3.0], 1.0), None);
    }

    #[test]
    fn all_pinned_inside_threshold_is_synchronized_at_once() {
        let g = complete(4);
        let pins = PinSet::new(&g, vec![0, 1, 2, 3], "all").unwrap();
        let cfg = DynamicsConfig { init_box: 1e-4, t_max: 0.5, ..Default::default() };
        let s = simulate(&g, &pins, &cfg, &FailureMask::none(4)).unwrap();
        assert_eq!(s.sync_time, Some(0.0));
    }

    #[test]
    fn failed_controllers_never_synchronize() {
        let g = path(10);
        let pins = PinSet::new(&g, vec![0, 5], "t").unwrap();
        let cfg = DynamicsConfig { t_max: 2.0, ..Default::default() };
        let s = simulate(&g, &pins, &cfg, &FailureMask::all(2)).unwrap();
        assert_eq!(s.sync_time, None);
    }

    #[test]
    fn deterministic_and_sampled() {
        let g = path(6);
        let pins = PinSet::new(&g, vec![2], "t").unwrap();
        let cfg = DynamicsConfig { t_max: 0.1, sample_stride: Some(10), ..Default::default() };
        let a = simulate(&g, &pins, &cfg, &FailureMask::none(1)).unwrap();
        let b = simulate(&g, &pins, &cfg, &FailureMask::none(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples.len(), 11);
        assert_eq!(a.samples[0].node_errors.len(), 6);
    }

    #[test]
    fn mask_length_checked() {
        let g = path(4);
        let pins = PinSet::new(&g, vec![1], "t").unwrap();
        let cfg = DynamicsConfig { t_max: 0.01, ..Default::default() };
        assert!(simulate(&g, &pins, &cfg, &FailureMask::none(2)).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(DynamicsConfig { dt: 0.0, ..Default::default() }.validate().is_err());
        assert!(DynamicsConfig { t_max: 1e-3, ..Default::default() }.validate().is_err());
        assert!(DynamicsConfig::default().validate().is_ok());
    }
}
