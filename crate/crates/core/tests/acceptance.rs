//! Acceptance suite: every reproduction target runs at its stated
//! tolerance and prints one `[PASS]`/`[FAIL]` line (visible under
//! `--nocapture`). Criterion 11 (byte-identical CLI reruns) lives in the
//! CLI crate's own acceptance test.

mod support;

use dbmatch::dynsim::{run_dynsim, stability_sweep, Algorithm, FabricConfig, Workload};
use dbmatch::experiments::{
    find_alpha_star, max_matching_baseline, run_replicates, sweep_alpha, AlphaGrid,
    ExperimentConfig,
};
use dbmatch::graph::DegreeSpec;
use dbmatch::matching::SelectionRule;
use dbmatch::rng::RngSeed;
use dbmatch::theory;
use dbmatch::thinning::ThinningPolicy;
use std::time::Instant;
use support::enumerate_uniform_mean_fraction;

const N: usize = 144;
const REPS: usize = 1000;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!("[{}] {criterion}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{criterion}: {detail}");
}

fn mc_cell(deg: DegreeSpec, thinning: ThinningPolicy, rule: SelectionRule, seed: u64) -> f64 {
    let cfg = ExperimentConfig {
        n: N,
        replicates: REPS,
        deg,
        thinning,
        rule,
        base_seed: RngSeed::new(seed),
    };
    run_replicates(&cfg).unwrap().rows[0].mean
}

fn binomial(d: u32) -> DegreeSpec {
    DegreeSpec::Binomial { n: N as u32, p: d as f64 / N as f64 }
}

#[test]
fn c01_uniform_mean_formula_is_exact_for_small_systems() {
    // exhaustive enumeration of all grant outcomes vs the closed form, for
    // n <= 3 and a simplex grid of degree pmfs on {0..3}
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=3usize {
        for a in 0..=3u32 {
            for b in 0..=3 - a {
                for c in 0..=3 - a - b {
                    let d = 3 - a - b - c;
                    let pmf: Vec<f64> = [a, b, c, d].iter().map(|&w| w as f64 / 3.0).collect();
                    let oracle = enumerate_uniform_mean_fraction(n, &pmf);
                    let formula = theory::mean_match_uniform(n, pmf[0]);
                    worst = worst.max((oracle - formula).abs());
                    cases += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        "criterion 1 (uniform-selection formula vs exhaustive enumeration)",
        worst < 1e-10 && elapsed.as_secs() < 1,
        &format!("{cases} cases, max |diff| = {worst:.2e}, {elapsed:?}"),
    );
}

#[test]
fn c02_table_one_binomial_outdegrees() {
    let start = Instant::now();
    let targets = [
        (2u32, 0.581, 0.681, 0.678),
        (4, 0.626, 0.655, 0.728),
        (8, 0.633, 0.455, 0.731),
    ];
    let mut detail = String::new();
    let mut pass = true;
    for (i, &(d, uniform, greedy, max2)) in targets.iter().enumerate() {
        let seed = 100 + i as u64;
        let u = mc_cell(binomial(d), ThinningPolicy::None, SelectionRule::DbUniform, seed);
        let g = mc_cell(binomial(d), ThinningPolicy::None, SelectionRule::DbGreedy, seed);
        let m = mc_cell(binomial(d), ThinningPolicy::MaxK(2), SelectionRule::DbGreedy, seed);
        pass &= (u - uniform).abs() <= 0.01 && (g - greedy).abs() <= 0.01 && (m - max2).abs() <= 0.01;
        detail.push_str(&format!(
            "d={d}: uniform {u:.3}/{uniform} greedy {g:.3}/{greedy} max2 {m:.3}/{max2}; "
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed.as_secs() < 60;
    detail.push_str(&format!("{elapsed:?}"));
    report("criterion 2 (summary table, binomial out-degrees)", pass, &detail);
}

#[test]
fn c03_table_two_deterministic_outdegrees() {
    let mut pass = true;
    let mut detail = String::new();
    for (i, d) in [2u32, 3, 4, 8].into_iter().enumerate() {
        let seed = 200 + i as u64;
        let u = mc_cell(
            DegreeSpec::Deterministic(d),
            ThinningPolicy::None,
            SelectionRule::DbUniform,
            seed,
        );
        let m = mc_cell(
            DegreeSpec::Deterministic(d),
            ThinningPolicy::MaxK(2),
            SelectionRule::DbGreedy,
            seed,
        );
        pass &= (u - 0.633).abs() <= 0.01 && (m - 0.737).abs() <= 0.01;
        detail.push_str(&format!("d={d}: uniform {u:.3} max2 {m:.3}; "));
    }
    for (d, greedy) in [(2u32, 0.729), (8, 0.431)] {
        let g = mc_cell(
            DegreeSpec::Deterministic(d),
            ThinningPolicy::None,
            SelectionRule::DbGreedy,
            210 + d as u64,
        );
        pass &= (g - greedy).abs() <= 0.01;
        detail.push_str(&format!("greedy d={d}: {g:.3}/{greedy}; "));
    }
    report("criterion 3 (summary table, deterministic out-degrees)", pass, &detail);
}

#[test]
fn c04_greedy_series_reference_values() {
    // reference values are figure coordinates quoted to 4 decimals, so the
    // +-0.0005 tolerance is applied inclusively at that quoted precision
    // (exact integer arithmetic on the 4th decimal)
    let det2 = theory::mean_match_greedy_bound(&DegreeSpec::Deterministic(2), 1e-12)
        .unwrap()
        .value;
    let pois10 = theory::mean_match_greedy_bound(&binomial(10), 1e-12).unwrap().value;
    let quantized = |v: f64| (v * 1e4).round() as i64;
    let pass = (quantized(det2) - 7306).abs() <= 5 && (quantized(pois10) - 3972).abs() <= 5;
    report(
        "criterion 4 (greedy series values)",
        pass,
        &format!("deterministic(2) -> {det2:.6} (ref 0.7306), binomial mean 10 -> {pois10:.6} (ref 0.3972)"),
    );
}

#[test]
fn c05_uniform_limits() {
    let det = theory::mean_match_uniform_limit(&DegreeSpec::Deterministic(3)).unwrap();
    let lim4 = theory::mean_match_uniform_limit(&binomial(4)).unwrap();
    let mc4 = mc_cell(binomial(4), ThinningPolicy::None, SelectionRule::DbUniform, 500);
    let pass = (det - 0.632121).abs() <= 1e-6 && (lim4 - mc4).abs() < 0.01;
    report(
        "criterion 5 (uniform-selection limits)",
        pass,
        &format!("deterministic limit {det:.7}; binomial-4 limit {lim4:.4} vs MC {mc4:.4}"),
    );
}

#[test]
fn c06_alpha_sweep_and_argmax() {
    let cfg = ExperimentConfig {
        n: N,
        replicates: REPS,
        deg: binomial(8),
        thinning: ThinningPolicy::None,
        rule: SelectionRule::DbUniform,
        base_seed: RngSeed::new(600),
    };
    let (star, value) = find_alpha_star(&cfg, &AlphaGrid::argmax_default()).unwrap();
    let det4 = ExperimentConfig {
        deg: DegreeSpec::Deterministic(4),
        base_seed: RngSeed::new(601),
        ..cfg.clone()
    };
    let sweep = sweep_alpha(&det4, &AlphaGrid { start: -2.0, stop: -2.0, step: 1.0 }).unwrap();
    let at_minus_two = sweep.rows.iter().find(|r| r.x == -2.0).unwrap().mean;
    let pass = (value - 0.661).abs() <= 0.01
        && (-2.0..=-0.8).contains(&star)
        && (at_minus_two - 0.701).abs() <= 0.01;
    report(
        "criterion 6 (optimal exponent search)",
        pass,
        &format!(
            "binomial-8: alpha* {star:.1} value {value:.3}; deterministic-4 at alpha=-2: {at_minus_two:.3}"
        ),
    );
}

#[test]
fn c07_omniscient_baseline() {
    let cfg = ExperimentConfig {
        n: N,
        replicates: REPS,
        deg: binomial(4),
        thinning: ThinningPolicy::None,
        rule: SelectionRule::DbUniform,
        base_seed: RngSeed::new(700),
    };
    let mean = max_matching_baseline(&cfg).unwrap().rows[0].mean;
    report(
        "criterion 7 (maximum-matching baseline)",
        (mean - 0.972).abs() <= 0.005,
        &format!("binomial-4 mean max-matching fraction {mean:.4} (ref 0.972)"),
    );
}

#[test]
fn c08_binomial_reciprocal_identity() {
    // 100 randomized cases against direct summation
    let mut rng = RngSeed::new(800).chacha();
    use rand::Rng;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1..=50u32);
        let p: f64 = rng.random_range(0.01..1.0);
        let theta: f64 = rng.random_range(-1.0..1.0);
        let law = theory::BinomialLaw::new(n, p).unwrap();
        let direct: f64 = (0..=n as i64)
            .map(|k| theta.powi(k as i32 + 1) / (k as f64 + 1.0) * law.pmf(k))
            .sum();
        let formula = theory::binom_reciprocal(n, p, theta).unwrap();
        worst = worst.max((formula - direct).abs());
    }
    report(
        "criterion 8 (reciprocal-moment identity)",
        worst < 1e-10,
        &format!("100 cases, max |diff| = {worst:.2e}"),
    );
}

fn saturation_fabric(algorithm: Algorithm) -> FabricConfig {
    FabricConfig {
        horizon: 8_000,
        warmup: 3_000,
        algorithm,
        ..FabricConfig::defaults(algorithm)
    }
}

#[test]
fn c09_dynsim_saturation_cross_checks() {
    let seed = RngSeed::new(4242);
    let f1 = saturation_fabric(Algorithm::OneRoundDcPim);
    let w = Workload::sgd_like(f1.bdp_bytes() as f64);
    let dcpim = run_dynsim(&f1, &w, 0.85, seed).unwrap().mean_matching_fraction;
    let f2 = saturation_fabric(Algorithm::TwoCgs);
    let twocgs = run_dynsim(&f2, &w, 0.85, seed).unwrap().mean_matching_fraction;
    let uniform_theory = theory::mean_match_uniform(N, 0.0);
    let greedy_theory = theory::mean_match_greedy_bound(&DegreeSpec::Deterministic(2), 1e-12)
        .unwrap()
        .value;
    let pass = (dcpim - 0.633).abs() <= 0.01
        && (twocgs - 0.731).abs() <= 0.01
        && (dcpim - uniform_theory).abs() <= 0.01
        && (twocgs - greedy_theory).abs() <= 0.01;
    report(
        "criterion 9 (saturated matching fractions)",
        pass,
        &format!(
            "1rdcpim {dcpim:.4} (refs 0.633 / {uniform_theory:.4}), 2cgs {twocgs:.4} (refs 0.731 / {greedy_theory:.4})"
        ),
    );
}

#[test]
fn c10_stability_ordering() {
    // Pinned grid; the maximum sustainable load of each algorithm is
    // estimated as the stability-region supremum: stable grid loads count
    // as themselves, overloaded runs contribute their saturated throughput
    // (the plateau in the throughput-vs-load curve locates the boundary).
    let loads = [0.40, 0.50, 0.60, 0.70];
    let seed = RngSeed::new(777);
    let mut boundary = Vec::new();
    let mut detail = String::new();
    let mut fct_onset_ok = true;
    let mut grid_verdicts = (false, false); // (2cgs stable @0.6, dcpim unstable @0.6)
    for algo in [Algorithm::Islip, Algorithm::OneRoundDcPim, Algorithm::TwoCgs] {
        let fabric = FabricConfig {
            horizon: 30_000,
            warmup: 10_000,
            algorithm: algo,
            ..FabricConfig::defaults(algo)
        };
        let w = Workload::sgd_like(fabric.bdp_bytes() as f64);
        let table = stability_sweep(&fabric, &w, &loads, seed).unwrap();
        let est = table.stability_boundary();
        boundary.push(est);
        detail.push_str(&format!("{} boundary {est:.3}; ", algo.name()));
        if algo == Algorithm::TwoCgs {
            grid_verdicts.0 = table.rows.iter().any(|r| r.load == 0.60 && r.stable);
        }
        if algo == Algorithm::OneRoundDcPim {
            grid_verdicts.1 = table.rows.iter().any(|r| r.load == 0.60 && !r.stable);
        }
        // FCT blow-up onset coincides with the instability load: the long
        // message FCT at the first unstable grid load dwarfs the value at
        // the last stable one
        let last_stable = table.rows.iter().rfind(|r| r.stable);
        let first_unstable = table.rows.iter().find(|r| !r.stable);
        if let (Some(s), Some(u)) = (last_stable, first_unstable) {
            let ok = u.long_fct.p50 >= 2.0 * s.long_fct.p50;
            fct_onset_ok &= ok;
            detail.push_str(&format!(
                "{} fct p50 {:.1} -> {:.1}; ",
                algo.name(),
                s.long_fct.p50,
                u.long_fct.p50
            ));
        } else {
            fct_onset_ok = false;
        }
    }
    let ordered = boundary[0] < boundary[1] && boundary[1] < boundary[2];
    let pass = ordered && grid_verdicts.0 && grid_verdicts.1 && fct_onset_ok;
    detail.push_str(&format!(
        "2cgs stable@0.60: {}, 1rdcpim unstable@0.60: {}",
        grid_verdicts.0, grid_verdicts.1
    ));
    report("criterion 10 (stability ordering)", pass, &detail);
}
