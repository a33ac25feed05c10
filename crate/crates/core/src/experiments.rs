//! Seeded Monte Carlo harness for matching-fraction studies.
//!
//! Replicates are parallelized with disjoint RNG streams and aggregated in
//! replicate order, so results are bit-identical at any thread count. Alpha
//! sweeps reuse the graph and selection streams across grid points (common
//! random numbers), which smooths the argmax search.

use crate::error::ConfigError;
use crate::graph::{generate_dout, DegreeSpec};
use crate::matching::{max_matching, run_round, SelectionRule};
use crate::rng::{domain, RngSeed};
use crate::theory;
use crate::thinning::{intention_degree_spec, thin, ThinningPolicy};
use rayon::prelude::*;
use std::fmt::Write as _;

/// One Monte Carlo configuration: a degree law, a thinning policy, a
/// selection rule, and a replicate budget.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n: usize,
    pub replicates: usize,
    pub deg: DegreeSpec,
    pub thinning: ThinningPolicy,
    pub rule: SelectionRule,
    pub base_seed: RngSeed,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n == 0 {
            return Err(ConfigError::invalid("n must be >= 1"));
        }
        if self.replicates == 0 {
            return Err(ConfigError::invalid("replicates must be >= 1"));
        }
        self.deg.validate()?;
        self.thinning.validate()
    }
}

/// Evenly spaced alpha grid over `[start, stop]`.
#[derive(Debug, Clone, Copy)]
pub struct AlphaGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl AlphaGrid {
    /// Grid used for the optimal-exponent search: 0.1 resolution over
    /// [-20, 0]; the exact greedy limit is appended separately.
    pub fn argmax_default() -> Self {
        AlphaGrid {
            start: -20.0,
            stop: 0.0,
            step: 0.1,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.step.is_finite() || self.step <= 0.0 || self.start > self.stop {
            return Err(ConfigError::invalid(format!(
                "bad alpha grid {}..{} step {}",
                self.start, self.stop, self.step
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step).round() as usize;
        (0..=count)
            .map(|i| {
                // snap accumulated rounding so grid points print cleanly and
                // alpha = 0 takes the uniform path exactly
                let a = self.start + i as f64 * self.step;
                let a = (a * 1e9).round() / 1e9;
                if a == 0.0 {
                    0.0
                } else {
                    a
                }
            })
            .collect()
    }
}

/// One aggregated row: `x` is the swept quantity (mean degree or alpha).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub mean: f64,
    pub q1: f64,
    pub q3: f64,
    pub stderr: f64,
    pub theory: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Fixed CSV schema `x,mean,q1,q3,stderr,theory`; the theory field is
    /// empty where no closed form applies. Locale-independent formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,mean,q1,q3,stderr,theory\n");
        for r in &self.rows {
            let _ = write!(
                out,
                "{},{:.6},{:.6},{:.6},{:.6},",
                r.x, r.mean, r.q1, r.q3, r.stderr
            );
            if let Some(t) = r.theory {
                let _ = write!(out, "{t:.6}");
            }
            out.push('\n');
        }
        out
    }
}

/// Matched fractions for one rule over all replicates; graph and thinning
/// streams depend only on the replicate index.
fn sample_fractions(cfg: &ExperimentConfig, rule: SelectionRule) -> Result<Vec<f64>, ConfigError> {
    cfg.validate()?;
    (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|r| {
            let g = generate_dout(cfg.n, &cfg.deg, cfg.base_seed.derive(domain::GRAPH, r))?;
            let ig = thin(&g, cfg.thinning, cfg.base_seed.derive(domain::THIN, r));
            Ok(run_round(&ig, rule, cfg.base_seed.derive(domain::MATCH, r)).matched_fraction)
        })
        .collect()
}

fn aggregate(x: f64, mut fractions: Vec<f64>, theory: Option<f64>) -> SweepRow {
    let n = fractions.len();
    let mean = fractions.iter().sum::<f64>() / n as f64;
    let var = if n > 1 {
        fractions.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    fractions.sort_by(|a, b| a.partial_cmp(b).unwrap());
    SweepRow {
        x,
        mean,
        q1: quantile(&fractions, 0.25),
        q3: quantile(&fractions, 0.75),
        stderr: (var / n as f64).sqrt(),
        theory,
    }
}

/// Linear-interpolation quantile of a sorted sample.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    if lo + 1 < sorted.len() {
        sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac
    } else {
        sorted[lo]
    }
}

/// Closed-form prediction for the configured rule on the intention graph's
/// degree law, where one exists.
pub fn theory_value(cfg: &ExperimentConfig) -> Option<f64> {
    let ispec = intention_degree_spec(&cfg.deg, cfg.thinning);
    match cfg.rule {
        SelectionRule::DbUniform => Some(theory::mean_match_uniform(cfg.n, ispec.prob_zero())),
        SelectionRule::DbAlpha(a) => {
            if a == 0.0 {
                Some(theory::mean_match_uniform(cfg.n, ispec.prob_zero()))
            } else {
                None
            }
        }
        SelectionRule::DbGreedy => theory::mean_match_greedy_bound(&ispec, 1e-12)
            .ok()
            .map(|b| b.value),
    }
}

/// Run the configured rule over all replicates and aggregate one row.
pub fn run_replicates(cfg: &ExperimentConfig) -> Result<SweepResult, ConfigError> {
    let fractions = sample_fractions(cfg, cfg.rule)?;
    let row = aggregate(cfg.deg.mean(), fractions, theory_value(cfg));
    Ok(SweepResult { rows: vec![row] })
}

/// Sweep DB(alpha) over `grid` with common random numbers: every grid point
/// sees the same graphs, the same thinning, and the same per-sender and
/// per-receiver draws. The exact greedy limit is appended as the
/// `x = -inf` terminal row.
pub fn sweep_alpha(cfg: &ExperimentConfig, grid: &AlphaGrid) -> Result<SweepResult, ConfigError> {
    cfg.validate()?;
    grid.validate()?;
    let alphas = grid.values();
    let mut rules: Vec<(f64, SelectionRule)> = vec![(f64::NEG_INFINITY, SelectionRule::DbGreedy)];
    rules.extend(alphas.iter().map(|&a| (a, SelectionRule::DbAlpha(a))));

    // per replicate: one graph, one thinning, all rules
    let per_rep: Vec<Vec<f64>> = (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|r| {
            let g = generate_dout(cfg.n, &cfg.deg, cfg.base_seed.derive(domain::GRAPH, r))?;
            let ig = thin(&g, cfg.thinning, cfg.base_seed.derive(domain::THIN, r));
            let mseed = cfg.base_seed.derive(domain::MATCH, r);
            Ok(rules
                .iter()
                .map(|&(_, rule)| run_round(&ig, rule, mseed).matched_fraction)
                .collect())
        })
        .collect::<Result<_, ConfigError>>()?;

    let rows = rules
        .iter()
        .enumerate()
        .map(|(i, &(x, rule))| {
            let fractions: Vec<f64> = per_rep.iter().map(|rep| rep[i]).collect();
            let theory = theory_value(&ExperimentConfig {
                rule,
                ..cfg.clone()
            });
            aggregate(x, fractions, theory)
        })
        .collect();
    Ok(SweepResult { rows })
}

/// Grid argmax of the common-random-number mean curve, ties broken toward
/// larger alpha (the greedy limit participates as the most negative point).
/// Returns `(alpha_star, achieved mean)`.
pub fn find_alpha_star(
    cfg: &ExperimentConfig,
    grid: &AlphaGrid,
) -> Result<(f64, f64), ConfigError> {
    let sweep = sweep_alpha(cfg, grid)?;
    let mut best = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for row in &sweep.rows {
        if row.mean >= best.1 {
            best = (row.x, row.mean);
        }
    }
    Ok(best)
}

/// Mean maximum-matching fraction over the same replicate graphs: the
/// omniscient upper bound for any single-round algorithm.
pub fn max_matching_baseline(cfg: &ExperimentConfig) -> Result<SweepResult, ConfigError> {
    cfg.validate()?;
    let fractions: Vec<f64> = (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|r| {
            let g = generate_dout(cfg.n, &cfg.deg, cfg.base_seed.derive(domain::GRAPH, r))?;
            let ig = thin(&g, cfg.thinning, cfg.base_seed.derive(domain::THIN, r));
            Ok(max_matching(&ig) as f64 / ig.n_receivers() as f64)
        })
        .collect::<Result<_, ConfigError>>()?;
    let row = aggregate(cfg.deg.mean(), fractions, None);
    Ok(SweepResult { rows: vec![row] })
}
