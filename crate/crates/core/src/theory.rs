//! Closed-form evaluators for the mean matching fraction.
//!
//! Uniform selection admits an exact finite-N expression depending on the
//! out-degree law only through `P{D=0}`. Greedy (minimum-degree) selection
//! admits an asymptotic series built from the grant probability `f(s)`
//! toward a degree-`s` receiver; the series is evaluated with explicit
//! truncation diagnostics. Binomial and Poisson tail quantities are
//! accumulated in log space with compensated summation: raising a tail
//! probability to the power of a sender degree amplifies pmf error.

use crate::error::ConfigError;
use crate::graph::DegreeSpec;

/// Binomial(n, p) with pmf/cdf/ccdf accessors and the `k = -1` convention
/// `ccdf(-1) = 1` used throughout the greedy analysis.
#[derive(Debug, Clone)]
pub struct BinomialLaw {
    n: u32,
    p: f64,
    ln_fact: Vec<f64>,
}

impl BinomialLaw {
    pub fn new(n: u32, p: f64) -> Result<Self, ConfigError> {
        if !(0.0..=1.0).contains(&p) || p.is_nan() {
            return Err(ConfigError::ProbabilityOutOfRange {
                name: "binomial p",
                value: p,
            });
        }
        let mut ln_fact = Vec::with_capacity(n as usize + 2);
        ln_fact.push(0.0);
        for k in 1..=(n as usize + 1) {
            ln_fact.push(ln_fact[k - 1] + (k as f64).ln());
        }
        Ok(BinomialLaw { n, p, ln_fact })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// q_k = P{X = k}; zero outside the support.
    pub fn pmf(&self, k: i64) -> f64 {
        if k < 0 || k > self.n as i64 {
            return 0.0;
        }
        let k = k as usize;
        let n = self.n as usize;
        if self.p == 0.0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        if self.p == 1.0 {
            return if k == n { 1.0 } else { 0.0 };
        }
        let ln = self.ln_fact[n] - self.ln_fact[k] - self.ln_fact[n - k]
            + k as f64 * self.p.ln()
            + (n - k) as f64 * (1.0 - self.p).ln_1p_neg();
        ln.exp()
    }

    /// Q_k = P{X <= k}.
    pub fn cdf(&self, k: i64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        if k >= self.n as i64 {
            return 1.0;
        }
        // sum the smaller side directly with compensated accumulation
        let mean = self.n as f64 * self.p;
        if (k as f64) <= mean {
            kahan_sum((0..=k).map(|j| self.pmf(j)))
        } else {
            1.0 - kahan_sum((k + 1..=self.n as i64).map(|j| self.pmf(j)))
        }
    }

    /// Q̄_k = P{X > k}; Q̄_{-1} = 1.
    pub fn ccdf(&self, k: i64) -> f64 {
        if k < 0 {
            return 1.0;
        }
        if k >= self.n as i64 {
            return 0.0;
        }
        let mean = self.n as f64 * self.p;
        if (k as f64) >= mean {
            kahan_sum((k + 1..=self.n as i64).map(|j| self.pmf(j)))
        } else {
            1.0 - kahan_sum((0..=k).map(|j| self.pmf(j)))
        }
    }
}

// ln(1-p) evaluated accurately for p near 0: `x.ln_1p_neg()` reads as
// ln(x) where x = 1-p was already formed; use ln_1p on -p when possible.
trait Ln1pNeg {
    fn ln_1p_neg(self) -> f64;
}

impl Ln1pNeg for f64 {
    fn ln_1p_neg(self) -> f64 {
        // self is 1-p; reconstruct p to use ln_1p when 1-p is close to 1
        let p = 1.0 - self;
        if p.abs() < 0.5 {
            (-p).ln_1p()
        } else {
            self.ln()
        }
    }
}

fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Poisson(mean) with pmf/cdf/ccdf and the `Π̄_{-1} = 1` convention.
/// Tail probabilities are summed forward from the pmf recurrence so deep
/// tails retain full relative precision.
#[derive(Debug, Clone)]
pub struct PoissonLaw {
    mean: f64,
}

impl PoissonLaw {
    pub fn new(mean: f64) -> Result<Self, ConfigError> {
        if !mean.is_finite() || mean <= 0.0 {
            return Err(ConfigError::invalid(format!(
                "poisson mean must be positive, got {mean}"
            )));
        }
        Ok(PoissonLaw { mean })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// π_s = e^{-m} m^s / s!.
    pub fn pmf(&self, s: i64) -> f64 {
        if s < 0 {
            return 0.0;
        }
        let m = self.mean;
        let mut ln_fact = 0.0;
        for j in 1..=s {
            ln_fact += (j as f64).ln();
        }
        (-m + s as f64 * m.ln() - ln_fact).exp()
    }

    /// Π_s = P{X <= s}.
    pub fn cdf(&self, s: i64) -> f64 {
        if s < 0 {
            return 0.0;
        }
        1.0 - self.ccdf(s)
    }

    /// Π̄_s = P{X > s}; Π̄_{-1} = 1. Relative truncation error below 1e-16.
    pub fn ccdf(&self, s: i64) -> f64 {
        if s < 0 {
            return 1.0;
        }
        let m = self.mean;
        if (s as f64) < m {
            // lower side is smaller only when s << m; here just use 1 - sum
            let mut term = (-m).exp();
            let mut acc = 0.0;
            let mut c = 0.0;
            for j in 0..=s {
                let y = term - c;
                let t = acc + y;
                c = (t - acc) - y;
                acc = t;
                term *= m / (j + 1) as f64;
            }
            1.0 - acc
        } else {
            // forward tail sum starting at pmf(s+1)
            let mut term = self.pmf(s + 1);
            let mut acc = 0.0;
            let mut c = 0.0;
            let mut j = s + 1;
            while term > 0.0 {
                let y = term - c;
                let t = acc + y;
                c = (t - acc) - y;
                acc = t;
                j += 1;
                let next = term * m / j as f64;
                if next < acc * 1e-18 {
                    break;
                }
                term = next;
            }
            acc
        }
    }
}

/// Exact mean matching fraction under uniform (DB(0)) selection:
/// `1 - (1 - (1 - P{D=0})/n)^n`.
pub fn mean_match_uniform(n: usize, prob_zero: f64) -> f64 {
    let n_f = n as f64;
    1.0 - (1.0 - (1.0 - prob_zero) / n_f).powi(n as i32)
}

/// Large-system limit of the uniform mean matching fraction:
/// `1 - e^{-(1 - p0)}` with `p0` the limiting probability of a zero
/// out-degree (deterministic: indicator of `d = 0`; Binomial(n, p) with
/// fixed mean np: `e^{-np}`; Poisson(m): `e^{-m}`).
pub fn mean_match_uniform_limit(deg: &DegreeSpec) -> Result<f64, ConfigError> {
    let p0 = match deg {
        DegreeSpec::Deterministic(d) => {
            if *d == 0 {
                1.0
            } else {
                0.0
            }
        }
        DegreeSpec::Binomial { n, p } => (-(*n as f64 * p)).exp(),
        DegreeSpec::Poisson { mean } => (-mean).exp(),
        DegreeSpec::Empirical { .. } => {
            return Err(ConfigError::invalid(
                "uniform limit is defined for deterministic, binomial, or poisson degrees",
            ))
        }
    };
    Ok(1.0 - (-(1.0 - p0)).exp())
}

/// `E[theta^{X+1}/(X+1)]` for `X ~ Bin(n, p)`, in closed form:
/// `((1-p+p*theta)^{n+1} - (1-p)^{n+1}) / ((n+1) p)`.
pub fn binom_reciprocal(n: u32, p: f64, theta: f64) -> Result<f64, ConfigError> {
    if p <= 0.0 || p > 1.0 || p.is_nan() {
        return Err(ConfigError::ProbabilityOutOfRange {
            name: "binomial p",
            value: p,
        });
    }
    let np1 = n as f64 + 1.0;
    Ok(((1.0 - p + p * theta).powi(n as i32 + 1) - (1.0 - p).powi(n as i32 + 1)) / (np1 * p))
}

/// Finite-N conditional grant probability under greedy selection: the
/// probability that a degree-`d_u` sender grants a fixed neighbor of degree
/// `s`, when the residual degrees of its neighbors are iid
/// `Bin(n-1, meandeg/n)`. Zero when `s-1` lies outside that support.
pub fn greedy_grant_prob_finite(n: usize, meandeg: f64, d_u: u32, s: i64) -> f64 {
    assert!(d_u >= 1, "sender degree must be positive");
    let law = BinomialLaw::new(n as u32 - 1, meandeg / n as f64).expect("valid residual law");
    let q = law.pmf(s - 1);
    if q == 0.0 {
        return 0.0;
    }
    let hi = law.ccdf(s - 2).powi(d_u as i32);
    let lo = law.ccdf(s - 1).powi(d_u as i32);
    (hi - lo) / (d_u as f64 * q)
}

/// Limiting grant probability `f(s)` toward a degree-`s` receiver under
/// greedy selection; `f(0) = 0`.
///
/// `f(s) = (G(Π̄_{s-2}) - G(Π̄_{s-1})) / (mean * π_{s-1})` where `G` is the
/// out-degree pgf and `π`, `Π̄` are Poisson(mean) quantities. A Binomial
/// degree spec is evaluated with its limiting Poisson pgf, matching the
/// regime in which the series holds.
pub fn greedy_f(s: u64, deg: &DegreeSpec) -> Result<f64, ConfigError> {
    if deg.mean() <= 0.0 {
        return Err(ConfigError::invalid(
            "greedy analysis requires a positive mean degree",
        ));
    }
    if s == 0 {
        return Ok(0.0);
    }
    let mean = deg.mean();
    let law = PoissonLaw::new(mean)?;
    let s = s as i64;
    let pi = law.pmf(s - 1);
    if pi == 0.0 {
        return Ok(0.0);
    }
    let hi = limit_pgf(deg, law.ccdf(s - 2));
    let lo = limit_pgf(deg, law.ccdf(s - 1));
    Ok(((hi - lo) / (mean * pi)).clamp(0.0, 1.0))
}

/// Asymptotic pgf used by the greedy series: exact for deterministic,
/// Poisson, and empirical degrees; the Poisson limit for Binomial.
fn limit_pgf(deg: &DegreeSpec, z: f64) -> f64 {
    match deg {
        DegreeSpec::Binomial { n, p } => (-(*n as f64 * p) * (1.0 - z)).exp(),
        other => other.pgf(z),
    }
}

/// Closed-form `f(s)` fast paths: `(Π̄_{s-2}^d - Π̄_{s-1}^d)/(d π_{s-1})`
/// for deterministic degree `d`, and
/// `(e^{-m Π_{s-2}} - e^{-m Π_{s-1}})/(m π_{s-1})` for Poisson(m).
/// Cross-validated against [`greedy_f`] in tests.
pub fn greedy_f_deterministic(s: u64, d: u32) -> f64 {
    if s == 0 || d == 0 {
        return 0.0;
    }
    let law = PoissonLaw::new(d as f64).expect("positive mean");
    let s = s as i64;
    let pi = law.pmf(s - 1);
    if pi == 0.0 {
        return 0.0;
    }
    ((law.ccdf(s - 2).powi(d as i32) - law.ccdf(s - 1).powi(d as i32)) / (d as f64 * pi))
        .clamp(0.0, 1.0)
}

/// See [`greedy_f_deterministic`].
pub fn greedy_f_poisson(s: u64, mean: f64) -> f64 {
    if s == 0 {
        return 0.0;
    }
    let law = PoissonLaw::new(mean).expect("positive mean");
    let s = s as i64;
    let pi = law.pmf(s - 1);
    if pi == 0.0 {
        return 0.0;
    }
    ((((-mean * law.cdf(s - 2)).exp()) - ((-mean * law.cdf(s - 1)).exp())) / (mean * pi))
        .clamp(0.0, 1.0)
}

/// Result of the greedy series evaluation with truncation diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct GreedyBound {
    pub value: f64,
    /// Number of terms summed (s = 0..terms-1).
    pub terms: usize,
    /// Poisson weight left beyond the truncation point; bounds the error.
    pub tail_mass: f64,
}

/// Asymptotic mean matching fraction under greedy selection:
/// `1 - sum_s π_s (1 - f(s))^s` with Poisson(mean) weights, truncated when
/// the remaining weight drops below `tail_tol` (and after at least
/// `10*mean + 50` terms).
pub fn mean_match_greedy_bound(
    deg: &DegreeSpec,
    tail_tol: f64,
) -> Result<GreedyBound, ConfigError> {
    if !tail_tol.is_finite() || tail_tol <= 0.0 {
        return Err(ConfigError::invalid("tail_tol must be positive"));
    }
    let mean = deg.mean();
    if mean <= 0.0 {
        return Err(ConfigError::invalid(
            "greedy analysis requires a positive mean degree",
        ));
    }
    let min_terms = (10.0 * mean + 50.0).ceil() as usize;
    let mut weight = (-mean).exp(); // π_0
    let mut covered = 0.0;
    let mut acc = 0.0;
    let mut c = 0.0;
    let mut s: usize = 0;
    loop {
        let f = greedy_f(s as u64, deg)?;
        let term = weight * (1.0 - f).powi(s as i32);
        let y = term - c;
        let t = acc + y;
        c = (t - acc) - y;
        acc = t;
        covered += weight;
        s += 1;
        if s >= min_terms && 1.0 - covered < tail_tol {
            break;
        }
        if s > 100_000 {
            break;
        }
        weight *= mean / s as f64;
    }
    Ok(GreedyBound {
        value: 1.0 - acc,
        terms: s,
        tail_mass: (1.0 - covered).max(0.0),
    })
}
