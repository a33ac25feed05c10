//! Edge sparsification applied to a feasible graph before matching.
//!
//! Two mechanisms: `Bern(q)` keeps each edge independently with probability
//! `q`; `max(k)` keeps a uniform random `k`-subset of each neighborhood with
//! more than `k` edges and leaves smaller neighborhoods intact. Thinning a
//! `G(n,n,p)` graph with `Bern(q)` yields `G(n,n,pq)`; `max(k)` thinning of a
//! `d`-out graph yields a `min(d,k)`-out graph.

use crate::error::ConfigError;
use crate::graph::{BipartiteGraph, DegreeSpec};
use crate::rng::RngSeed;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ThinningPolicy {
    None,
    Bernoulli(f64),
    MaxK(u32),
}

impl ThinningPolicy {
    pub fn validate(&self) -> Result<(), ConfigError> {
        match self {
            ThinningPolicy::None => Ok(()),
            ThinningPolicy::Bernoulli(q) => {
                if !(0.0..=1.0).contains(q) || q.is_nan() {
                    Err(ConfigError::ProbabilityOutOfRange {
                        name: "thinning q",
                        value: *q,
                    })
                } else {
                    Ok(())
                }
            }
            ThinningPolicy::MaxK(k) => {
                if *k == 0 {
                    Err(ConfigError::invalid("max(k) thinning requires k >= 1"))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Sparsify `g` into an intention graph. Output neighborhoods are sorted,
/// duplicate-free subsets of the input neighborhoods. Callers should derive
/// the seed on a stream independent of graph generation so thinning can be
/// varied against a fixed feasible graph.
pub fn thin(g: &BipartiteGraph, policy: ThinningPolicy, seed: RngSeed) -> BipartiteGraph {
    policy.validate().expect("invalid thinning policy");
    match policy {
        ThinningPolicy::None => g.clone(),
        ThinningPolicy::Bernoulli(q) => {
            if q == 1.0 {
                return g.clone();
            }
            let mut rng = seed.chacha();
            let n = g.n_senders();
            let mut adj = Vec::with_capacity(n);
            for u in 0..n {
                let kept: Vec<u32> = g
                    .neighbors(u)
                    .iter()
                    .copied()
                    .filter(|_| rng.random::<f64>() < q)
                    .collect();
                adj.push(kept);
            }
            BipartiteGraph::new(n, g.n_receivers(), adj).expect("subset of valid graph")
        }
        ThinningPolicy::MaxK(k) => {
            let k = k as usize;
            let mut rng = seed.chacha();
            let n = g.n_senders();
            let mut adj = Vec::with_capacity(n);
            for u in 0..n {
                let nbrs = g.neighbors(u);
                if nbrs.len() <= k {
                    adj.push(nbrs.to_vec());
                    continue;
                }
                let mut pool = nbrs.to_vec();
                for i in 0..k {
                    let j = rng.random_range(i..pool.len());
                    pool.swap(i, j);
                }
                pool.truncate(k);
                pool.sort_unstable();
                adj.push(pool);
            }
            BipartiteGraph::new(n, g.n_receivers(), adj).expect("subset of valid graph")
        }
    }
}

/// Out-degree law of the intention graph produced by thinning a `deg`-out
/// feasible graph. Used to attach closed-form predictions to thinned
/// experiments; ignores the truncation at `n`, which only matters for
/// degrees comparable to the system size.
pub fn intention_degree_spec(deg: &DegreeSpec, policy: ThinningPolicy) -> DegreeSpec {
    match policy {
        ThinningPolicy::None => deg.clone(),
        ThinningPolicy::Bernoulli(q) => match deg {
            DegreeSpec::Deterministic(d) => DegreeSpec::Binomial { n: *d, p: q },
            DegreeSpec::Binomial { n, p } => DegreeSpec::Binomial { n: *n, p: p * q },
            DegreeSpec::Poisson { mean } => DegreeSpec::Poisson { mean: mean * q },
            DegreeSpec::Empirical { pmf } => {
                // mixture over D of Bin(D, q)
                let max_d = pmf.len() - 1;
                let mut out = vec![0.0; max_d + 1];
                for (d, &pd) in pmf.iter().enumerate() {
                    if pd == 0.0 {
                        continue;
                    }
                    let mut term = (1.0 - q).powi(d as i32);
                    for (j, slot) in out.iter_mut().enumerate().take(d + 1) {
                        *slot += pd * term;
                        if j < d {
                            term *= (d - j) as f64 / (j + 1) as f64 * (q / (1.0 - q));
                        }
                    }
                }
                DegreeSpec::Empirical { pmf: out }
            }
        },
        ThinningPolicy::MaxK(k) => match deg {
            DegreeSpec::Deterministic(d) => DegreeSpec::Deterministic((*d).min(k)),
            other => {
                // law of min(D, k)
                let k = k as usize;
                let mut pmf = vec![0.0; k + 1];
                let mut below = 0.0;
                for (j, slot) in pmf.iter_mut().enumerate().take(k) {
                    let pj = degree_pmf(other, j);
                    *slot = pj;
                    below += pj;
                }
                pmf[k] = (1.0 - below).max(0.0);
                DegreeSpec::Empirical { pmf }
            }
        },
    }
}

fn degree_pmf(deg: &DegreeSpec, j: usize) -> f64 {
    match deg {
        DegreeSpec::Deterministic(d) => {
            if *d as usize == j {
                1.0
            } else {
                0.0
            }
        }
        DegreeSpec::Binomial { n, p } => {
            let n = *n as usize;
            if j > n {
                return 0.0;
            }
            let mut term = (1.0 - p).powi(n as i32);
            for i in 0..j {
                term *= (n - i) as f64 / (i + 1) as f64 * (p / (1.0 - p));
            }
            term
        }
        DegreeSpec::Poisson { mean } => {
            let mut term = (-mean).exp();
            for i in 1..=j {
                term *= mean / i as f64;
            }
            term
        }
        DegreeSpec::Empirical { pmf } => pmf.get(j).copied().unwrap_or(0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_dout;
    use proptest::prelude::*;

    #[test]
    fn bernoulli_one_is_identity() {
        let g = generate_dout(20, &DegreeSpec::Deterministic(5), RngSeed::new(3)).unwrap();
        assert_eq!(thin(&g, ThinningPolicy::Bernoulli(1.0), RngSeed::new(9)), g);
        assert_eq!(thin(&g, ThinningPolicy::None, RngSeed::new(9)), g);
    }

    #[test]
    fn maxk_caps_out_degrees() {
        let adj = vec![vec![0, 1, 2, 3, 4], vec![1, 3], vec![]];
        let g = BipartiteGraph::new(3, 5, adj).unwrap();
        let t = thin(&g, ThinningPolicy::MaxK(2), RngSeed::new(4));
        let degs: Vec<usize> = (0..3).map(|u| t.sender_degree(u)).collect();
        assert_eq!(degs, vec![2, 2, 0]);
    }

    #[test]
    #[should_panic(expected = "invalid thinning policy")]
    fn invalid_policy_panics() {
        let g = BipartiteGraph::empty(2);
        thin(&g, ThinningPolicy::Bernoulli(1.5), RngSeed::new(0));
    }

    #[test]
    fn intention_spec_means() {
        let det = DegreeSpec::Deterministic(6);
        let b = intention_degree_spec(&det, ThinningPolicy::Bernoulli(0.5));
        assert!((b.mean() - 3.0).abs() < 1e-12);
        let m = intention_degree_spec(&det, ThinningPolicy::MaxK(2));
        assert_eq!(m, DegreeSpec::Deterministic(2));

        let bin = DegreeSpec::Binomial { n: 144, p: 8.0 / 144.0 };
        let m2 = intention_degree_spec(&bin, ThinningPolicy::MaxK(2));
        m2.validate().unwrap();
        // min(D,2) keeps P{D=0} and P{D=1}
        assert!((m2.prob_zero() - bin.prob_zero()).abs() < 1e-12);

        let emp = DegreeSpec::Empirical { pmf: vec![0.25, 0.5, 0.25] };
        let thinned = intention_degree_spec(&emp, ThinningPolicy::Bernoulli(0.4));
        thinned.validate().unwrap();
        assert!((thinned.mean() - emp.mean() * 0.4).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn thinned_adjacency_is_subset(seed in 0u64..500, q in 0.0f64..=1.0, k in 1u32..6) {
            let g = generate_dout(24, &DegreeSpec::Poisson { mean: 4.0 }, RngSeed::new(seed)).unwrap();
            for policy in [ThinningPolicy::Bernoulli(q), ThinningPolicy::MaxK(k)] {
                let t = thin(&g, policy, RngSeed::new(seed ^ 0xdead));
                for u in 0..24 {
                    let orig = g.neighbors(u);
                    let kept = t.neighbors(u);
                    prop_assert!(kept.windows(2).all(|w| w[0] < w[1]));
                    prop_assert!(kept.iter().all(|v| orig.contains(v)));
                    if let ThinningPolicy::MaxK(k) = policy {
                        prop_assert_eq!(kept.len(), orig.len().min(k as usize));
                    }
                }
            }
        }
    }
}
