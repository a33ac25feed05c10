//! Preset registry: canned experiment and simulation configurations for
//! the standard reproduction tables and figures. Every preset runs with no
//! extra flags; `--reps` (experiments) and `--slots` (simulations) rescale
//! the run without changing its shape.

use dbmatch::dynsim::{stability_sweep, Algorithm, FabricConfig, Workload};
use dbmatch::experiments::{
    find_alpha_star, max_matching_baseline, run_replicates, sweep_alpha, AlphaGrid,
    ExperimentConfig,
};
use dbmatch::rng::domain;
use dbmatch::{ConfigError, DegreeSpec, RngSeed, SelectionRule, ThinningPolicy};
use std::fmt::Write as _;

const N: usize = 144;

pub fn listing() -> String {
    let mut out = String::new();
    let mut line = |name: &str, desc: &str| {
        let _ = writeln!(out, "{name:<8} {desc}");
    };
    line("fig3a", "uniform selection vs mean degree, binomial out-degrees (csv: series,x,mean,q1,q3,stderr,theory)");
    line("fig3b", "greedy selection vs mean degree, binomial out-degrees");
    line("fig4a", "uniform selection vs mean degree, deterministic out-degrees");
    line("fig4b", "greedy selection vs mean degree, deterministic out-degrees");
    line("fig5a", "mean matching vs alpha with max-matching baseline, binomial out-degrees");
    line("fig5b", "mean matching vs alpha with max-matching baseline, deterministic out-degrees");
    line("fig6a", "alpha sweeps under max(k) thinning, binomial out-degrees");
    line("fig6b", "alpha sweeps under Bern(k/d) thinning, deterministic out-degrees");
    line("table1", "uniform/greedy/optimal-alpha/max(2)+greedy summary, binomial (csv: d,uniform,greedy,max2_greedy,alpha_star,optimal)");
    line("table2", "same summary for deterministic out-degrees");
    line("fig7", "dynsim load sweep, all algorithms, imc10-like workload (csv: algo,load,matching_fraction,throughput,fct_short_p50,fct_long_p50,control_total,stable)");
    line("fig8", "dynsim load sweep, all algorithms, sgd-like workload");
    out
}

fn cfg(
    seed: RngSeed,
    idx: u64,
    reps: usize,
    deg: DegreeSpec,
    thinning: ThinningPolicy,
    rule: SelectionRule,
) -> ExperimentConfig {
    ExperimentConfig {
        n: N,
        replicates: reps,
        deg,
        thinning,
        rule,
        base_seed: seed.derive(domain::CONFIG, idx),
    }
}

fn push_rows(out: &mut String, series: &str, rows: &[dbmatch::experiments::SweepRow]) {
    for r in rows {
        let _ = write!(out, "{series},{},{:.6},{:.6},{:.6},{:.6},", r.x, r.mean, r.q1, r.q3, r.stderr);
        if let Some(t) = r.theory {
            let _ = write!(out, "{t:.6}");
        }
        out.push('\n');
    }
}

const SWEEP_HEADER: &str = "series,x,mean,q1,q3,stderr,theory\n";

/// Mean-degree scans (uniform or greedy rule, binomial or deterministic).
fn degree_scan(
    seed: RngSeed,
    reps: usize,
    rule: SelectionRule,
    binomial: bool,
    degrees: &[u32],
) -> Result<String, ConfigError> {
    let mut out = String::from(SWEEP_HEADER);
    let series = match rule {
        SelectionRule::DbGreedy => "dbinf",
        _ => "db0",
    };
    for (i, &d) in degrees.iter().enumerate() {
        let deg = if binomial {
            DegreeSpec::Binomial { n: N as u32, p: d as f64 / N as f64 }
        } else {
            DegreeSpec::Deterministic(d)
        };
        let res = run_replicates(&cfg(seed, i as u64, reps, deg, ThinningPolicy::None, rule))?;
        push_rows(&mut out, series, &res.rows);
    }
    Ok(out)
}

/// Alpha sweeps per degree plus the omniscient max-matching baseline.
fn alpha_scan(seed: RngSeed, reps: usize, binomial: bool) -> Result<String, ConfigError> {
    let grid = AlphaGrid { start: -20.0, stop: 0.0, step: 1.0 };
    let mut out = String::from(SWEEP_HEADER);
    for (i, &d) in [2u32, 3, 4, 8].iter().enumerate() {
        let deg = if binomial {
            DegreeSpec::Binomial { n: N as u32, p: d as f64 / N as f64 }
        } else {
            DegreeSpec::Deterministic(d)
        };
        let c = cfg(seed, i as u64, reps, deg, ThinningPolicy::None, SelectionRule::DbUniform);
        let sweep = sweep_alpha(&c, &grid)?;
        push_rows(&mut out, &format!("d={d}"), &sweep.rows);
        let baseline = max_matching_baseline(&c)?;
        push_rows(&mut out, &format!("maxmatch-d={d}"), &baseline.rows);
    }
    Ok(out)
}

/// Alpha sweeps under thinning: max(k) on binomial graphs or Bern(k/d) on
/// deterministic graphs, for d x k combinations.
fn thinned_alpha_scan(seed: RngSeed, reps: usize, maxk: bool) -> Result<String, ConfigError> {
    let grid = AlphaGrid { start: -15.0, stop: 0.0, step: 1.0 };
    let mut out = String::from(SWEEP_HEADER);
    let mut idx = 0u64;
    for &d in &[4u32, 8] {
        for &k in &[2u32, 3, 4] {
            let (deg, thinning) = if maxk {
                (
                    DegreeSpec::Binomial { n: N as u32, p: d as f64 / N as f64 },
                    ThinningPolicy::MaxK(k),
                )
            } else {
                (
                    DegreeSpec::Deterministic(d),
                    ThinningPolicy::Bernoulli(k as f64 / d as f64),
                )
            };
            let c = cfg(seed, idx, reps, deg, thinning, SelectionRule::DbUniform);
            idx += 1;
            let sweep = sweep_alpha(&c, &grid)?;
            push_rows(&mut out, &format!("d={d},k={k}"), &sweep.rows);
        }
    }
    Ok(out)
}

/// Per-degree summary: uniform, greedy, max(2)+greedy, and the optimal
/// exponent found by grid search with common random numbers.
fn summary_table(seed: RngSeed, reps: usize, binomial: bool) -> Result<String, ConfigError> {
    let mut out = String::from("d,uniform,greedy,max2_greedy,alpha_star,optimal\n");
    for (i, &d) in [2u32, 3, 4, 8].iter().enumerate() {
        let deg = if binomial {
            DegreeSpec::Binomial { n: N as u32, p: d as f64 / N as f64 }
        } else {
            DegreeSpec::Deterministic(d)
        };
        let base = cfg(
            seed,
            i as u64,
            reps,
            deg,
            ThinningPolicy::None,
            SelectionRule::DbUniform,
        );
        let uniform = run_replicates(&base)?.rows[0].mean;
        let greedy = run_replicates(&ExperimentConfig {
            rule: SelectionRule::DbGreedy,
            ..base.clone()
        })?
        .rows[0]
            .mean;
        let max2 = run_replicates(&ExperimentConfig {
            rule: SelectionRule::DbGreedy,
            thinning: ThinningPolicy::MaxK(2),
            ..base.clone()
        })?
        .rows[0]
            .mean;
        let (star, optimal) = find_alpha_star(&base, &AlphaGrid::argmax_default())?;
        let _ = writeln!(
            out,
            "{d},{uniform:.6},{greedy:.6},{max2:.6},{star},{optimal:.6}"
        );
    }
    Ok(out)
}

pub fn run_experiment_preset(
    name: &str,
    reps: usize,
    seed: RngSeed,
) -> Option<Result<String, ConfigError>> {
    let r = match name {
        "fig3a" => degree_scan(seed, reps, SelectionRule::DbUniform, true, &[2, 4, 6, 8, 10]),
        "fig3b" => degree_scan(seed, reps, SelectionRule::DbGreedy, true, &[2, 3, 4, 5, 6, 8, 10]),
        "fig4a" => degree_scan(seed, reps, SelectionRule::DbUniform, false, &[2, 4, 6, 8, 10]),
        "fig4b" => degree_scan(seed, reps, SelectionRule::DbGreedy, false, &[2, 3, 4, 5, 6, 8, 10]),
        "fig5a" => alpha_scan(seed, reps, true),
        "fig5b" => alpha_scan(seed, reps, false),
        "fig6a" => thinned_alpha_scan(seed, reps, true),
        "fig6b" => thinned_alpha_scan(seed, reps, false),
        "table1" => summary_table(seed, reps, true),
        "table2" => summary_table(seed, reps, false),
        _ => return None,
    };
    Some(r)
}

pub fn run_dynsim_preset(
    name: &str,
    slots: usize,
    warmup: usize,
    seed: RngSeed,
) -> Option<Result<String, ConfigError>> {
    let workload_for = |fabric: &FabricConfig| match name {
        "fig7" => Some(Workload::imc10_like(fabric.bdp_bytes() as f64)),
        "fig8" => Some(Workload::sgd_like(fabric.bdp_bytes() as f64)),
        _ => None,
    };
    let loads: Vec<f64> = (0..=11).map(|i| 0.30 + 0.05 * i as f64).collect();
    let mut out = String::from(
        "algo,load,matching_fraction,throughput,fct_short_p50,fct_long_p50,control_total,stable\n",
    );
    for (i, algo) in [Algorithm::OneRoundDcPim, Algorithm::TwoCgs, Algorithm::Islip]
        .iter()
        .enumerate()
    {
        let fabric = FabricConfig {
            algorithm: *algo,
            horizon: slots,
            warmup,
            ..FabricConfig::defaults(*algo)
        };
        let workload = workload_for(&fabric)?;
        let table = match stability_sweep(
            &fabric,
            &workload,
            &loads,
            seed.derive(domain::CONFIG, i as u64),
        ) {
            Ok(t) => t,
            Err(e) => return Some(Err(e)),
        };
        for r in &table.rows {
            let _ = writeln!(
                out,
                "{},{:.2},{:.6},{:.6},{:.4},{:.4},{},{}",
                algo.name(),
                r.load,
                r.matching_fraction,
                r.throughput,
                r.short_fct.p50,
                r.long_fct.p50,
                r.control_total,
                r.stable
            );
        }
    }
    Some(Ok(out))
}
