//! Shared oracles and statistical helpers for the integration suites.
//! Each test binary compiles this module separately, so not every helper
//! is used by every binary.
#![allow(dead_code)]
//!
//! The enumeration oracle computes expected matched fractions by brute
//! force, independent of the implementation code paths it checks.

/// Exhaustive expectation of the matched fraction under uniform (DB(0))
/// grants: every sender draws a degree from `pmf` (support 0..=pmf.len()-1,
/// capped at `n`), picks a uniform subset of receivers of that size, and
/// grants one neighbor uniformly. Feasible only for tiny `n`: the joint
/// grant space has (n+1)^n outcomes.
pub fn enumerate_uniform_mean_fraction(n: usize, pmf: &[f64]) -> f64 {
    assert!((1..=4).contains(&n));
    // per-sender pmf over {no grant, receiver 0, ..., receiver n-1},
    // via explicit subset enumeration
    let mut outcome = vec![0.0; n + 1];
    for (d_raw, &pd) in pmf.iter().enumerate() {
        if pd == 0.0 {
            continue;
        }
        let d = d_raw.min(n);
        if d == 0 {
            outcome[0] += pd;
            continue;
        }
        let mut subsets = 0usize;
        let mut acc = vec![0.0; n];
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != d {
                continue;
            }
            subsets += 1;
            for (v, a) in acc.iter_mut().enumerate() {
                if mask & (1 << v) != 0 {
                    *a += 1.0 / d as f64;
                }
            }
        }
        for v in 0..n {
            outcome[v + 1] += pd * acc[v] / subsets as f64;
        }
    }

    // joint expectation over independent senders (odometer enumeration)
    let mut total = 0.0;
    let mut idx = vec![0usize; n];
    loop {
        let mut prob = 1.0;
        let mut hit = 0u32;
        for &i in &idx {
            prob *= outcome[i];
            if i > 0 {
                hit |= 1 << (i - 1);
            }
        }
        total += prob * hit.count_ones() as f64;
        let mut u = 0;
        loop {
            idx[u] += 1;
            if idx[u] <= n {
                break;
            }
            idx[u] = 0;
            u += 1;
            if u == n {
                return total / n as f64;
            }
        }
    }
}

/// Welch's t statistic for two independent samples.
pub fn welch_t(a: &[f64], b: &[f64]) -> f64 {
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let var = |s: &[f64], m: f64| {
        s.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (s.len() - 1) as f64
    };
    let (ma, mb) = (mean(a), mean(b));
    let (va, vb) = (var(a, ma), var(b, mb));
    (ma - mb) / (va / a.len() as f64 + vb / b.len() as f64).sqrt()
}

/// Chi-square critical value via the Wilson-Hilferty approximation.
pub fn chi2_critical(df: f64, z: f64) -> f64 {
    let a = 2.0 / (9.0 * df);
    df * (1.0 - a + z * a.sqrt()).powi(3)
}

/// Goodness-of-fit statistic with low-expectation bins merged into their
/// neighbor until every bin expects at least `min_expected` counts.
/// Returns (statistic, degrees of freedom).
pub fn chi_square_gof(observed: &[u64], expected: &[f64], min_expected: f64) -> (f64, usize) {
    assert_eq!(observed.len(), expected.len());
    let mut bins: Vec<(f64, f64)> = Vec::new(); // (observed, expected)
    let mut acc_o = 0.0;
    let mut acc_e = 0.0;
    for (&o, &e) in observed.iter().zip(expected) {
        acc_o += o as f64;
        acc_e += e;
        if acc_e >= min_expected {
            bins.push((acc_o, acc_e));
            acc_o = 0.0;
            acc_e = 0.0;
        }
    }
    if acc_e > 0.0 {
        if let Some(last) = bins.last_mut() {
            last.0 += acc_o;
            last.1 += acc_e;
        } else {
            bins.push((acc_o, acc_e));
        }
    }
    let stat = bins
        .iter()
        .map(|&(o, e)| (o - e).powi(2) / e)
        .sum::<f64>();
    (stat, bins.len().saturating_sub(1))
}
