//! Bipartite graph representation and D-out random graph generation.
//!
//! A `D`-out random graph on `n` senders and `n` receivers draws each
//! sender's out-degree iid from a [`DegreeSpec`] (capped at `n`), then picks
//! that many distinct receivers uniformly at random, independently across
//! senders. Receiver degrees are then marginally `Bin(n, mean/n)`.

use crate::error::ConfigError;
use crate::rng::RngSeed;
use rand::Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Sender-indexed adjacency for a bipartite graph. Neighborhoods are kept
/// sorted and duplicate-free so iteration order never depends on hashing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_senders: usize,
    n_receivers: usize,
    adj: Vec<Vec<u32>>,
}

impl BipartiteGraph {
    /// Build from explicit neighborhoods, validating ranges and ordering.
    pub fn new(
        n_senders: usize,
        n_receivers: usize,
        adj: Vec<Vec<u32>>,
    ) -> Result<Self, ConfigError> {
        if adj.len() != n_senders {
            return Err(ConfigError::invalid(format!(
                "adjacency has {} rows for {} senders",
                adj.len(),
                n_senders
            )));
        }
        for (u, nbrs) in adj.iter().enumerate() {
            for w in nbrs.windows(2) {
                if w[0] >= w[1] {
                    return Err(ConfigError::invalid(format!(
                        "neighborhood of sender {u} is not strictly increasing"
                    )));
                }
            }
            if let Some(&v) = nbrs.last() {
                if v as usize >= n_receivers {
                    return Err(ConfigError::invalid(format!(
                        "sender {u} lists receiver {v} >= {n_receivers}"
                    )));
                }
            }
        }
        Ok(BipartiteGraph {
            n_senders,
            n_receivers,
            adj,
        })
    }

    /// Graph with no edges.
    pub fn empty(n: usize) -> Self {
        BipartiteGraph {
            n_senders: n,
            n_receivers: n,
            adj: vec![Vec::new(); n],
        }
    }

    /// Complete bipartite graph K_{n,n}.
    pub fn complete(n: usize) -> Self {
        let all: Vec<u32> = (0..n as u32).collect();
        BipartiteGraph {
            n_senders: n,
            n_receivers: n,
            adj: vec![all; n],
        }
    }

    pub fn n_senders(&self) -> usize {
        self.n_senders
    }

    pub fn n_receivers(&self) -> usize {
        self.n_receivers
    }

    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.adj[u]
    }

    pub fn sender_degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Line-oriented text form: header `N <n>`, then one `u: v1 v2 ...` line
    /// per sender with the neighborhood in increasing order.
    pub fn dump_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "N {}", self.n_senders);
        for (u, nbrs) in self.adj.iter().enumerate() {
            let _ = write!(out, "{u}:");
            for v in nbrs {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    /// Parse the [`dump_text`](Self::dump_text) format.
    pub fn parse_text(text: &str) -> Result<Self, ConfigError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| ConfigError::GraphParse {
                line: 1,
                reason: "empty input".into(),
            })?;
        let n: usize = header
            .strip_prefix("N ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| ConfigError::GraphParse {
                line: 1,
                reason: format!("expected `N <count>`, got `{header}`"),
            })?;
        let mut adj = vec![Vec::new(); n];
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let (head, rest) = line.split_once(':').ok_or_else(|| ConfigError::GraphParse {
                line: lineno,
                reason: "missing `:`".into(),
            })?;
            let u: usize = head.trim().parse().map_err(|_| ConfigError::GraphParse {
                line: lineno,
                reason: format!("bad sender index `{head}`"),
            })?;
            if u >= n {
                return Err(ConfigError::GraphParse {
                    line: lineno,
                    reason: format!("sender {u} out of range"),
                });
            }
            let mut nbrs = Vec::new();
            for tok in rest.split_whitespace() {
                let v: u32 = tok.parse().map_err(|_| ConfigError::GraphParse {
                    line: lineno,
                    reason: format!("bad receiver index `{tok}`"),
                })?;
                nbrs.push(v);
            }
            adj[u] = nbrs;
        }
        BipartiteGraph::new(n, n, adj).map_err(|e| ConfigError::GraphParse {
            line: 0,
            reason: e.to_string(),
        })
    }
}

/// Distribution of a sender's out-degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DegreeSpec {
    Deterministic(u32),
    Binomial { n: u32, p: f64 },
    Poisson { mean: f64 },
    /// Explicit pmf over degrees `0..pmf.len()`.
    Empirical { pmf: Vec<f64> },
}

impl DegreeSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        match self {
            DegreeSpec::Deterministic(_) => Ok(()),
            DegreeSpec::Binomial { p, .. } => {
                if !(0.0..=1.0).contains(p) || p.is_nan() {
                    Err(ConfigError::ProbabilityOutOfRange {
                        name: "binomial p",
                        value: *p,
                    })
                } else {
                    Ok(())
                }
            }
            DegreeSpec::Poisson { mean } => {
                if !mean.is_finite() || *mean < 0.0 {
                    Err(ConfigError::invalid(format!("poisson mean {mean}")))
                } else {
                    Ok(())
                }
            }
            DegreeSpec::Empirical { pmf } => {
                if pmf.is_empty() || pmf.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
                    return Err(ConfigError::invalid("empirical pmf entries must be in [0,1]"));
                }
                let sum: f64 = pmf.iter().sum();
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(ConfigError::PmfNotNormalized { sum });
                }
                Ok(())
            }
        }
    }

    /// Mean out-degree.
    pub fn mean(&self) -> f64 {
        match self {
            DegreeSpec::Deterministic(d) => *d as f64,
            DegreeSpec::Binomial { n, p } => *n as f64 * p,
            DegreeSpec::Poisson { mean } => *mean,
            DegreeSpec::Empirical { pmf } => {
                pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
            }
        }
    }

    /// P{D = 0}.
    pub fn prob_zero(&self) -> f64 {
        match self {
            DegreeSpec::Deterministic(d) => {
                if *d == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            DegreeSpec::Binomial { n, p } => (1.0 - p).powi(*n as i32),
            DegreeSpec::Poisson { mean } => (-mean).exp(),
            DegreeSpec::Empirical { pmf } => pmf[0],
        }
    }

    /// Probability generating function E[z^D].
    pub fn pgf(&self, z: f64) -> f64 {
        match self {
            DegreeSpec::Deterministic(d) => z.powi(*d as i32),
            DegreeSpec::Binomial { n, p } => (1.0 - p + p * z).powi(*n as i32),
            DegreeSpec::Poisson { mean } => (-mean * (1.0 - z)).exp(),
            DegreeSpec::Empirical { pmf } => {
                // Horner from the top degree
                pmf.iter().rev().fold(0.0, |acc, &p| acc * z + p)
            }
        }
    }

    /// Draw one degree. The caller is responsible for capping at the number
    /// of receivers.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            DegreeSpec::Deterministic(d) => *d as u64,
            DegreeSpec::Binomial { n, p } => {
                if *p == 0.0 {
                    return 0;
                }
                rand_distr::Binomial::new(*n as u64, *p)
                    .expect("validated binomial")
                    .sample(rng)
            }
            DegreeSpec::Poisson { mean } => {
                if *mean == 0.0 {
                    return 0;
                }
                rand_distr::Poisson::new(*mean).expect("validated poisson").sample(rng) as u64
            }
            DegreeSpec::Empirical { pmf } => {
                let x: f64 = rng.random();
                let mut acc = 0.0;
                for (k, &p) in pmf.iter().enumerate() {
                    acc += p;
                    if x < acc {
                        return k as u64;
                    }
                }
                (pmf.len() - 1) as u64
            }
        }
    }
}

/// Generate a D-out random bipartite graph on `n` senders and `n` receivers.
///
/// Each sender draws `D_u` from `deg`, truncated to `min(D_u, n)`, and picks
/// a uniform random subset of receivers of that size via partial
/// Fisher-Yates. Identical `(n, deg, seed)` reproduce the graph exactly.
pub fn generate_dout(
    n: usize,
    deg: &DegreeSpec,
    seed: RngSeed,
) -> Result<BipartiteGraph, ConfigError> {
    if n == 0 {
        return Err(ConfigError::invalid("n must be >= 1"));
    }
    deg.validate()?;
    let mut rng = seed.chacha();
    // The pool stays a permutation of 0..n across senders, so each partial
    // shuffle still yields a uniform subset.
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let mut adj = Vec::with_capacity(n);
    for _ in 0..n {
        let d = (deg.sample(&mut rng) as usize).min(n);
        for i in 0..d {
            let j = rng.random_range(i..n);
            pool.swap(i, j);
        }
        let mut nbrs = pool[..d].to_vec();
        nbrs.sort_unstable();
        adj.push(nbrs);
    }
    Ok(BipartiteGraph {
        n_senders: n,
        n_receivers: n,
        adj,
    })
}

/// Receiver degrees: entry `v` counts the senders listing `v`.
pub fn receiver_degrees(g: &BipartiteGraph) -> Vec<u32> {
    let mut deg = vec![0u32; g.n_receivers];
    for nbrs in &g.adj {
        for &v in nbrs {
            deg[v as usize] += 1;
        }
    }
    deg
}
