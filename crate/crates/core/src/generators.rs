//! Seeded Barabási–Albert, Erdős–Rényi and Watts–Strogatz generators.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

const CONNECT_ATTEMPTS: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Ba,
    Er,
    Ws,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Ba => "ba",
            Model::Er => "er",
            Model::Ws => "ws",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ba" => Ok(Model::Ba),
            "er" => Ok(Model::Er),
            "ws" => Ok(Model::Ws),
            other => Err(Error::InvalidParameter(format!("unknown model {other:?}"))),
        }
    }
}

/// Parameters for one synthetic network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub model: Model,
    pub n: usize,
    #[serde(default = "default_ba_m")]
    pub ba_m: usize,
    #[serde(default = "default_er_p")]
    pub er_p: f64,
    #[serde(default = "default_ws_k")]
    pub ws_k: usize,
    #[serde(default = "default_ws_p")]
    pub ws_p: f64,
    #[serde(default)]
    pub seed: u64,
    /// Retry ER/WS draws until the result is connected.
    #[serde(default)]
    pub require_connected: bool,
}

fn default_ba_m() -> usize {
    3
}
fn default_er_p() -> f64 {
    0.1
}
fn default_ws_k() -> usize {
    10
}
fn default_ws_p() -> f64 {
    0.1
}

impl GenSpec {
    pub fn ba(n: usize, m: usize, seed: u64) -> Self {
        GenSpec { model: Model::Ba, ba_m: m, ..Self::base(n, seed) }
    }

    pub fn er(n: usize, p: f64, seed: u64) -> Self {
        GenSpec { model: Model::Er, er_p: p, ..Self::base(n, seed) }
    }

    pub fn ws(n: usize, k: usize, p: f64, seed: u64) -> Self {
        GenSpec { model: Model::Ws, ws_k: k, ws_p: p, ..Self::base(n, seed) }
    }

    fn base(n: usize, seed: u64) -> Self {
        GenSpec {
            model: Model::Er,
            n,
            ba_m: default_ba_m(),
            er_p: default_er_p(),
            ws_k: default_ws_k(),
            ws_p: default_ws_p(),
            seed,
            require_connected: false,
        }
    }

    pub fn connected(mut self, yes: bool) -> Self {
        self.require_connected = yes;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        match self.model {
            Model::Ba if self.ba_m == 0 || self.ba_m >= self.n => {
                bad(format!("BA needs 1 <= m < n, got m={} n={}", self.ba_m, self.n))
            }
            Model::Er if !(0.0..=1.0).contains(&self.er_p) => bad(format!("ER needs 0 <= p <= 1, got {}", self.er_p)),
            Model::Ws if !self.ws_k.is_multiple_of(2) || self.ws_k >= self.n => {
                bad(format!("WS needs even k < n, got k={} n={}", self.ws_k, self.n))
            }
            Model::Ws if !(0.0..=1.0).contains(&self.ws_p) => bad(format!("WS needs 0 <= p <= 1, got {}", self.ws_p)),
            _ => Ok(()),
        }
    }

    /// Short human-readable name, e.g. `ER(1000,p=0.1)`.
    pub fn name(&self) -> String {
        match self.model {
            Model::Ba => format!("BA({},m={})", self.n, self.ba_m),
            Model::Er => format!("ER({},p={})", self.n, self.er_p),
            Model::Ws => format!("WS({},k={},p={})", self.n, self.ws_k, self.ws_p),
        }
    }

    pub fn generate(&self) -> Result<Graph> {
        self.validate()?;
        let draw = |seed: u64| match self.model {
            Model::Ba => gen_ba(self.n, self.ba_m, seed),
            Model::Er => gen_er(self.n, self.er_p, seed),
            Model::Ws => gen_ws(self.n, self.ws_k, self.ws_p, seed),
        };
        // BA with this seed core is connected by construction
        if !self.require_connected || self.model == Model::Ba {
            return draw(self.seed);
        }
        let mut last = None;
        for attempt in 0..CONNECT_ATTEMPTS {
            let seed =
                if attempt == 0 { self.seed } else { rng::derive_seed(self.seed, "generator-retry", &[attempt]) };
            let g = draw(seed)?;
            if g.is_connected() {
                return Ok(g);
            }
            last = Some(g);
        }
        Err(Error::InvalidParameter(format!(
            "{} stayed disconnected after {CONNECT_ATTEMPTS} attempts ({} components in the last draw)",
            self.name(),
            last.map_or(0, |g| g.component_count())
        )))
    }
}

/// Erdős–Rényi G(n, p).
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("ER(n={n}, p={p})")));
    }
    let mut rng = rng::stream(seed, "er", &[]);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Barabási–Albert preferential attachment.
///
/// Starts from `m` isolated nodes. Every later node attaches to `m` distinct
/// existing nodes drawn proportionally to degree; the first arrival has no
/// degree mass to draw from and links to all seed nodes. `M = m (n - m)`.
pub fn gen_ba(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 || m >= n {
        return Err(Error::InvalidParameter(format!("BA(n={n}, m={m})")));
    }
    let mut rng = rng::stream(seed, "ba", &[]);
    // every edge endpoint once; a uniform pick is a degree-proportional pick
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * m * (n - m));
    let mut edges = Vec::with_capacity(m * (n - m));
    let mut targets: Vec<usize> = Vec::with_capacity(m);
    for v in m..n {
        targets.clear();
        if endpoints.is_empty() {
            targets.extend(0..m);
        } else {
            while targets.len() < m {
                let t = endpoints[rng.gen_range(0..endpoints.len())];
                if !targets.contains(&t) {
                    targets.push(t);
                }
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    Graph::from_edges(n, edges)
}

/// Watts–Strogatz small world.
///
/// Ring lattice with `k / 2` neighbors per side; each lattice edge keeps its
/// near endpoint and has its far endpoint rewired with probability `p` to a
/// uniformly drawn node that is neither the near endpoint nor already adjacent.
pub fn gen_ws(n: usize, k: usize, p: f64, seed: u64) -> Result<Graph> {
    if !k.is_multiple_of(2) || k >= n || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("WS(n={n}, k={k}, p={p})")));
    }
    let mut rng = rng::stream(seed, "ws", &[]);
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    for j in 1..=k / 2 {
        for u in 0..n {
            if rng.gen::<f64>() >= p {
                continue;
            }
            let v = (u + j) % n;
            if !adj[u].contains(&v) || adj[u].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.gen_range(0..n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    let edges =
        adj.iter().enumerate().flat_map(|(a, set)| set.iter().copied().filter(move |&b| b > a).map(move |b| (a, b)));
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_extremes() {
        assert_eq!(gen_er(10, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(gen_er(10, 1.0, 1).unwrap().edge_count(), 45);
    }

    #[test]
    fn er_edge_count_within_four_sigma() {
        let g = gen_er(1000, 0.1, 11).unwrap();
        let pairs = 1000.0 * 999.0 / 2.0;
        let mean = pairs * 0.1;
        let sigma = (pairs * 0.1 * 0.9f64).sqrt();
        assert!((g.edge_count() as f64 - mean).abs() <= 4.0 * sigma);
    }

    #[test]
    fn ba_small_is_tree() {
        let g = gen_ba(5, 1, 3).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert!(g.is_connected());
    }

    #[test]
    fn ba_edge_count_formula() {
        let g = gen_ba(1000, 3, 5).unwrap();
        assert_eq!(g.edge_count(), 2991);
        let avg = 2.0 * g.edge_count() as f64 / 1000.0;
        assert!((avg - 6.0).abs() < 0.05);
        assert!(g.is_connected());
    }

    #[test]
    fn ws_without_rewiring_is_regular() {
        let g = gen_ws(10, 4, 0.0, 9).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 4));
        assert_eq!(g.edge_count(), 20);
    }

    #[test]
    fn ws_rewiring_preserves_edges_and_near_half() {
        let g = gen_ws(1000, 10, 0.1, 2).unwrap();
        assert_eq!(g.edge_count(), 5000);
        assert!(g.min_degree() >= 5);
    }

    #[test]
    fn generators_are_deterministic() {
        for spec in [GenSpec::ba(200, 2, 4), GenSpec::er(200, 0.05, 4), GenSpec::ws(200, 6, 0.2, 4)] {
            assert_eq!(spec.generate().unwrap(), spec.generate().unwrap());
        }
        assert_ne!(gen_er(100, 0.1, 1).unwrap(), gen_er(100, 0.1, 2).unwrap());
    }

    #[test]
    fn connectivity_retry() {
        // sparse enough that some draws are disconnected
        let spec = GenSpec::er(100, 0.05, 1).connected(true);
        assert!(spec.generate().unwrap().is_connected());
        let hopeless = GenSpec::er(50, 0.0, 1).connected(true);
        assert!(hopeless.generate().is_err());
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(GenSpec::ba(5, 5, 0).validate().is_err());
        assert!(GenSpec::ws(10, 3, 0.1, 0).validate().is_err());
        assert!(GenSpec::ws(10, 10, 0.1, 0).validate().is_err());
        assert!(GenSpec::er(10, 1.5, 0).validate().is_err());
    }
}
