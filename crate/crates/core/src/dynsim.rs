//! Slotted flow-level simulator of matching-based long-message scheduling.
//!
//! Hosts sit behind full-duplex edge links on a non-blocking core; each host
//! is simultaneously a sender (uplink) and a receiver (downlink). Short
//! messages (at most one BDP) bypass matching and are served with strict
//! priority. Long messages queue per sender-receiver pair; the pairs with
//! pending long bytes form the feasible graph, and each slot one matching
//! phase runs on it, pipelined: the matching computed during slot `t` is
//! served in slot `t+1` and persists for exactly that slot.
//!
//! A matched pair serves the remainder of its head message, up to the
//! endpoints' residual slot budgets. A grant covers one message: when the
//! head completes mid-slot the pair stops until it is matched again, which
//! is what caps the saturated service rate below the raw matching fraction.
//!
//! Three algorithms are exposed: `TwoCgs` (max(2) thinning then greedy
//! minimum-degree selection), `OneRoundDcPim` (uniform selection, no
//! thinning) and `Islip` (one request/grant/accept iteration with
//! persistent round-robin pointers).

use crate::error::ConfigError;
use crate::graph::BipartiteGraph;
use crate::matching::{islip_round, run_round_at, ControlCounts, IslipState, SelectionRule};
use crate::rng::{domain, RngSeed};
use crate::thinning::{thin, ThinningPolicy};
use rand::Rng;
use rand_distr::Distribution;
use rayon::prelude::*;
use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

/// Stability slack on the throughput test: a load is served "in full" when
/// normalized throughput is within this margin of the offered load.
pub const EPS_STAB: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Algorithm {
    /// max(2) thinning followed by greedy minimum-degree selection.
    TwoCgs,
    /// Uniform selection on the unthinned feasible graph.
    OneRoundDcPim,
    /// Deterministic round-robin request/grant/accept.
    Islip,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::TwoCgs => "2cgs",
            Algorithm::OneRoundDcPim => "1rdcpim",
            Algorithm::Islip => "islip",
        }
    }
}

/// Fabric and run geometry. One matching phase is pipelined per slot, so
/// the slot must cover at least one control round-trip.
#[derive(Debug, Clone)]
pub struct FabricConfig {
    pub n_hosts: usize,
    /// Edge link rate, bytes/second.
    pub link_rate: f64,
    /// Base round-trip time, seconds.
    pub base_rtt: f64,
    /// Slot duration, seconds; must be >= base_rtt.
    pub slot_duration: f64,
    pub algorithm: Algorithm,
    /// Total simulated slots.
    pub horizon: usize,
    /// Slots excluded from aggregate metrics.
    pub warmup: usize,
}

impl FabricConfig {
    /// 144 hosts on 100 Gbps links, 4 us RTT (50 kB BDP), one-RTT slots.
    pub fn defaults(algorithm: Algorithm) -> Self {
        FabricConfig {
            n_hosts: 144,
            link_rate: 12.5e9,
            base_rtt: 4.0e-6,
            slot_duration: 4.0e-6,
            algorithm,
            horizon: 30_000,
            warmup: 10_000,
        }
    }

    pub fn bdp_bytes(&self) -> u64 {
        (self.link_rate * self.base_rtt).round() as u64
    }

    pub fn slot_budget(&self) -> u64 {
        (self.link_rate * self.slot_duration).round() as u64
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_hosts == 0 {
            return Err(ConfigError::invalid("n_hosts must be >= 1"));
        }
        if !self.link_rate.is_finite()
            || self.link_rate <= 0.0
            || !self.base_rtt.is_finite()
            || self.base_rtt <= 0.0
        {
            return Err(ConfigError::invalid("link rate and RTT must be positive"));
        }
        if self.slot_duration < self.base_rtt {
            return Err(ConfigError::invalid(
                "slot_duration must be >= base_rtt (one matching phase per slot)",
            ));
        }
        if self.warmup >= self.horizon {
            return Err(ConfigError::invalid("warmup must be < horizon"));
        }
        Ok(())
    }
}

/// Message-size law. Arrivals are Poisson per sender-receiver pair; the
/// per-pair rate is derived from the target load and the analytic mean
/// size, so the configured load is met exactly in expectation.
#[derive(Debug, Clone)]
pub struct Workload {
    pub name: String,
    sampler: SizeSampler,
}

#[derive(Debug, Clone)]
enum SizeSampler {
    /// Short/long mixture: shorts log-uniform on `[short_lo, short_hi]`,
    /// longs bounded Pareto on `(pareto_lo, pareto_hi]`.
    Synthetic {
        p_short: f64,
        short_lo: f64,
        short_hi: f64,
        shape: f64,
        pareto_lo: f64,
        pareto_hi: f64,
    },
    /// Explicit size/probability table.
    Empirical { sizes: Vec<u64>, cum: Vec<f64> },
}

impl Workload {
    /// Heavy-tailed mixture patterned on datacenter measurement traces:
    /// 80% short RPC-like messages, long tail up to 10 BDP.
    pub fn imc10_like(bdp: f64) -> Self {
        Workload {
            name: "imc10-like".into(),
            sampler: SizeSampler::Synthetic {
                p_short: 0.8,
                short_lo: 256.0,
                short_hi: bdp,
                shape: 1.1,
                pareto_lo: bdp,
                pareto_hi: 10.0 * bdp,
            },
        }
    }

    /// Bulk-transfer-heavy mixture: fewer, smaller shorts and long messages
    /// up to 40 BDP, so nearly all bytes ride in long messages.
    pub fn sgd_like(bdp: f64) -> Self {
        Workload {
            name: "sgd-like".into(),
            sampler: SizeSampler::Synthetic {
                p_short: 0.6,
                short_lo: 256.0,
                short_hi: 8192.0_f64.min(bdp),
                shape: 1.1,
                pareto_lo: bdp,
                pareto_hi: 40.0 * bdp,
            },
        }
    }

    /// Parse an empirical size table: one `<size_bytes> <probability>` pair
    /// per line. Blank lines and `#` comments are ignored.
    pub fn from_table(name: &str, text: &str) -> Result<Self, ConfigError> {
        let mut sizes = Vec::new();
        let mut probs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (Some(s), Some(p)) = (it.next(), it.next()) else {
                return Err(ConfigError::invalid(format!(
                    "workload line {}: expected `<size_bytes> <probability>`",
                    i + 1
                )));
            };
            let size: u64 = s.parse().map_err(|_| {
                ConfigError::invalid(format!("workload line {}: bad size `{s}`", i + 1))
            })?;
            let prob: f64 = p.parse().map_err(|_| {
                ConfigError::invalid(format!("workload line {}: bad probability `{p}`", i + 1))
            })?;
            if size == 0 || !(0.0..=1.0).contains(&prob) {
                return Err(ConfigError::invalid(format!(
                    "workload line {}: size must be > 0 and probability in [0,1]",
                    i + 1
                )));
            }
            sizes.push(size);
            probs.push(prob);
        }
        if sizes.is_empty() {
            return Err(ConfigError::invalid("workload table is empty"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(ConfigError::PmfNotNormalized { sum: total });
        }
        let mut cum = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in probs {
            acc += p;
            cum.push(acc);
        }
        Ok(Workload {
            name: name.into(),
            sampler: SizeSampler::Empirical { sizes, cum },
        })
    }

    /// Analytic mean message size in bytes.
    pub fn mean_size(&self) -> f64 {
        match &self.sampler {
            SizeSampler::Synthetic {
                p_short,
                short_lo,
                short_hi,
                shape,
                pareto_lo,
                pareto_hi,
            } => {
                let short_mean = if short_hi > short_lo {
                    (short_hi - short_lo) / (short_hi / short_lo).ln()
                } else {
                    *short_lo
                };
                p_short * short_mean + (1.0 - p_short) * pareto_mean(*shape, *pareto_lo, *pareto_hi)
            }
            SizeSampler::Empirical { sizes, cum } => {
                let mut mean = 0.0;
                let mut prev = 0.0;
                for (s, c) in sizes.iter().zip(cum) {
                    mean += *s as f64 * (c - prev);
                    prev = *c;
                }
                mean
            }
        }
    }

    fn sample_size<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match &self.sampler {
            SizeSampler::Synthetic {
                p_short,
                short_lo,
                short_hi,
                shape,
                pareto_lo,
                pareto_hi,
            } => {
                if rng.random::<f64>() < *p_short {
                    let u: f64 = rng.random();
                    let x = (short_lo.ln() + u * (short_hi / short_lo).ln()).exp();
                    (x.round() as u64).clamp(1, short_hi.round() as u64)
                } else {
                    let u: f64 = rng.random();
                    let la = pareto_lo.powf(-shape);
                    let ha = pareto_hi.powf(-shape);
                    let x = (la - u * (la - ha)).powf(-1.0 / shape);
                    (x.round() as u64).clamp(pareto_lo.round() as u64 + 1, pareto_hi.round() as u64)
                }
            }
            SizeSampler::Empirical { sizes, cum } => {
                let u: f64 = rng.random();
                let idx = cum.partition_point(|&c| c <= u).min(sizes.len() - 1);
                sizes[idx]
            }
        }
    }
}

fn pareto_mean(shape: f64, lo: f64, hi: f64) -> f64 {
    // bounded Pareto mean, shape != 1
    let la = lo.powf(shape);
    (la / (1.0 - (lo / hi).powf(shape))) * (shape / (shape - 1.0))
        * (lo.powf(1.0 - shape) - hi.powf(1.0 - shape))
}

/// Per-slot observables: the matching produced by the phase run in this
/// slot, bytes served, and total queued bytes at slot end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotMetrics {
    pub slot: u64,
    pub matched: u32,
    pub served_bytes: u64,
    pub backlog_bytes: u64,
}

/// Normalized flow-completion-time statistics for one message class.
#[derive(Debug, Clone, Copy, Default)]
pub struct FctStats {
    pub completed: u64,
    pub mean: f64,
    pub p50: f64,
    pub p99: f64,
}

/// Aggregates of one simulation run (post-warmup unless noted).
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub algorithm: Algorithm,
    pub workload: String,
    pub load: f64,
    pub horizon: usize,
    pub warmup: usize,
    pub mean_matching_fraction: f64,
    pub normalized_throughput: f64,
    /// Control messages over the whole horizon.
    pub control_counts: ControlCounts,
    pub short_fct: FctStats,
    pub long_fct: FctStats,
    /// Whole-horizon byte accounting.
    pub arrived_bytes: u64,
    pub served_bytes: u64,
    pub final_backlog_bytes: u64,
    /// Backlog growth per slot over the final third, as a fraction of the
    /// system's per-slot byte capacity, with the regression noise level.
    pub backlog_slope_norm: f64,
    pub backlog_slope_noise: f64,
    pub slots: Vec<SlotMetrics>,
    pub warnings: Vec<String>,
}

impl RunSummary {
    /// Per-stage control message totals.
    pub fn control_census(&self) -> ControlCounts {
        self.control_counts
    }

    /// Stability verdict: the offered load is served within [`EPS_STAB`]
    /// and the backlog trajectory has no positive trend beyond noise.
    pub fn stable(&self) -> bool {
        self.normalized_throughput >= self.load - EPS_STAB
            && self.backlog_slope_norm <= self.backlog_slope_noise
    }

    /// Per-slot CSV: `slot,matched,served_bytes,backlog`.
    pub fn slots_csv(&self) -> String {
        let mut out = String::from("slot,matched,served_bytes,backlog\n");
        for s in &self.slots {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                s.slot, s.matched, s.served_bytes, s.backlog_bytes
            );
        }
        out
    }
}

struct LongMsg {
    remaining: u64,
    size: u64,
    arrival_slot: u64,
}

struct ShortMsg {
    from: u32,
    to: u32,
    remaining: u64,
    size: u64,
    arrival_slot: u64,
}

/// Run one simulation. Sequential over slots; deterministic for a fixed
/// seed at any thread count.
pub fn run_dynsim(
    fabric: &FabricConfig,
    workload: &Workload,
    load: f64,
    seed: RngSeed,
) -> Result<RunSummary, ConfigError> {
    fabric.validate()?;
    if !(0.0..=1.5).contains(&load) {
        return Err(ConfigError::invalid(format!("load {load} out of range")));
    }
    let n = fabric.n_hosts;
    let budget = fabric.slot_budget();
    let bdp = fabric.bdp_bytes();
    let slot_secs = fabric.slot_duration;
    let mean_size = workload.mean_size();
    // system-wide message arrivals per slot; per-pair processes are Poisson,
    // so their superposition is sampled directly
    let lambda_slot = load * n as f64 * budget as f64 / mean_size;
    let arrivals_distr = if lambda_slot > 0.0 {
        Some(rand_distr::Poisson::new(lambda_slot).expect("positive rate"))
    } else {
        None
    };

    let mut arrival_rng = seed.derive(domain::ARRIVAL, 0).chacha();
    let match_seed = seed.derive(domain::MATCH, 0);

    let mut long_queues: Vec<VecDeque<LongMsg>> = (0..n * n).map(|_| VecDeque::new()).collect();
    let mut active: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
    let mut shorts: VecDeque<ShortMsg> = VecDeque::new();
    // hosts arbitrate in their own fixed random orders; without a shared
    // port numbering the rotating collision-free schedule of a crossbar
    // arbiter does not form, which is what caps iSLIP on a fabric
    let mut islip_state = IslipState::with_orders(n, seed.derive(domain::ARBITER, 0));

    let mut up = vec![0u64; n];
    let mut down = vec![0u64; n];
    let mut matched_pairs: Vec<(u32, u32)> = Vec::new();

    let mut slots = Vec::with_capacity(fabric.horizon);
    let mut control = ControlCounts::default();
    let mut arrived_bytes = 0u64;
    let mut served_total = 0u64;
    let mut served_post_warmup = 0u64;
    let mut matched_post_warmup = 0u64;
    let mut backlog = 0u64;
    let mut short_ncfts: Vec<f64> = Vec::new();
    let mut long_ncfts: Vec<f64> = Vec::new();

    let optimal_secs = |size: u64| size as f64 / fabric.link_rate + fabric.base_rtt;

    for t in 0..fabric.horizon as u64 {
        // (1) arrivals at slot start
        if let Some(d) = &arrivals_distr {
            let k = d.sample(&mut arrival_rng).round() as u64;
            for _ in 0..k {
                let from = arrival_rng.random_range(0..n) as u32;
                let to = arrival_rng.random_range(0..n) as u32;
                let size = workload.sample_size(&mut arrival_rng);
                arrived_bytes += size;
                backlog += size;
                if size <= bdp {
                    shorts.push_back(ShortMsg {
                        from,
                        to,
                        remaining: size,
                        size,
                        arrival_slot: t,
                    });
                } else {
                    let q = &mut long_queues[from as usize * n + to as usize];
                    if q.is_empty() {
                        active[from as usize].insert(to);
                    }
                    q.push_back(LongMsg {
                        remaining: size,
                        size,
                        arrival_slot: t,
                    });
                }
            }
        }

        up.fill(budget);
        down.fill(budget);
        let mut served_slot = 0u64;

        // (2) shorts bypass matching, strict priority at both endpoints
        let mut still_pending = VecDeque::with_capacity(shorts.len());
        while let Some(mut msg) = shorts.pop_front() {
            let m = msg
                .remaining
                .min(up[msg.from as usize])
                .min(down[msg.to as usize]);
            if m > 0 {
                msg.remaining -= m;
                up[msg.from as usize] -= m;
                down[msg.to as usize] -= m;
                served_slot += m;
            }
            if msg.remaining == 0 {
                let observed = (t - msg.arrival_slot + 1) as f64 * slot_secs + fabric.base_rtt;
                if msg.arrival_slot >= fabric.warmup as u64 {
                    short_ncfts.push(observed / optimal_secs(msg.size));
                }
            } else {
                still_pending.push_back(msg);
            }
        }
        shorts = still_pending;

        // (3) serve the matching computed during the previous slot; a grant
        // covers the head message only
        for &(u, v) in &matched_pairs {
            let q = &mut long_queues[u as usize * n + v as usize];
            let Some(head) = q.front_mut() else { continue };
            let m = head.remaining.min(up[u as usize]).min(down[v as usize]);
            if m == 0 {
                continue;
            }
            head.remaining -= m;
            up[u as usize] -= m;
            down[v as usize] -= m;
            served_slot += m;
            if head.remaining == 0 {
                let observed = (t - head.arrival_slot + 1) as f64 * slot_secs + fabric.base_rtt;
                if head.arrival_slot >= fabric.warmup as u64 {
                    long_ncfts.push(observed / optimal_secs(head.size));
                }
                q.pop_front();
                if q.is_empty() {
                    active[u as usize].remove(&v);
                }
            }
        }

        served_total += served_slot;
        backlog -= served_slot;

        // (4) matching phase for the next slot, on the current feasible graph
        let adj: Vec<Vec<u32>> = active.iter().map(|s| s.iter().copied().collect()).collect();
        let feasible = BipartiteGraph::new(n, n, adj).expect("active sets are sorted");
        let result = match fabric.algorithm {
            Algorithm::TwoCgs => {
                let ig = thin(&feasible, ThinningPolicy::MaxK(2), seed.derive(domain::THIN, t));
                run_round_at(&ig, SelectionRule::DbGreedy, match_seed, t)
            }
            Algorithm::OneRoundDcPim => {
                run_round_at(&feasible, SelectionRule::DbUniform, match_seed, t)
            }
            Algorithm::Islip => islip_round(&feasible, &mut islip_state),
        };
        control.add(&result.control_counts);
        if t >= fabric.warmup as u64 {
            served_post_warmup += served_slot;
            matched_post_warmup += result.pairs.len() as u64;
        }
        slots.push(SlotMetrics {
            slot: t,
            matched: result.pairs.len() as u32,
            served_bytes: served_slot,
            backlog_bytes: backlog,
        });
        matched_pairs = result.pairs;
    }

    let window = (fabric.horizon - fabric.warmup) as f64;
    let capacity = n as f64 * budget as f64;
    let (slope_norm, slope_noise) = backlog_trend(&slots, capacity);

    let mut warnings = Vec::new();
    if short_ncfts.is_empty() && long_ncfts.is_empty() && load > 0.0 {
        warnings.push("no message completed after warmup; horizon may be too small".into());
    }

    Ok(RunSummary {
        algorithm: fabric.algorithm,
        workload: workload.name.clone(),
        load,
        horizon: fabric.horizon,
        warmup: fabric.warmup,
        mean_matching_fraction: matched_post_warmup as f64 / (window * n as f64),
        normalized_throughput: served_post_warmup as f64 / (window * capacity),
        control_counts: control,
        short_fct: fct_stats(short_ncfts),
        long_fct: fct_stats(long_ncfts),
        arrived_bytes,
        served_bytes: served_total,
        final_backlog_bytes: backlog,
        backlog_slope_norm: slope_norm,
        backlog_slope_noise: slope_noise,
        slots,
        warnings,
    })
}

/// Backlog trend over the final third of the horizon, normalized by the
/// per-slot system capacity. The backlog series is strongly autocorrelated
/// at slot scale, so the regression runs on block means (blocks longer than
/// the queue's correlation time behave as independent points); the noise
/// level is four standard errors of that slope.
fn backlog_trend(slots: &[SlotMetrics], capacity: f64) -> (f64, f64) {
    const BLOCKS: usize = 12;
    let start = slots.len() * 2 / 3;
    let tail = &slots[start..];
    if tail.len() < 4 * BLOCKS {
        return (0.0, f64::INFINITY);
    }
    let block_len = tail.len() / BLOCKS;
    let mut xs = [0.0f64; BLOCKS];
    let mut ys = [0.0f64; BLOCKS];
    for b in 0..BLOCKS {
        let chunk = &tail[b * block_len..(b + 1) * block_len];
        xs[b] = (b * block_len) as f64 + (block_len as f64 - 1.0) / 2.0;
        ys[b] = chunk.iter().map(|s| s.backlog_bytes as f64).sum::<f64>() / block_len as f64;
    }
    let x_mean = xs.iter().sum::<f64>() / BLOCKS as f64;
    let y_mean = ys.iter().sum::<f64>() / BLOCKS as f64;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for b in 0..BLOCKS {
        let dx = xs[b] - x_mean;
        sxx += dx * dx;
        sxy += dx * (ys[b] - y_mean);
    }
    let slope = sxy / sxx;
    let mut ss_resid = 0.0;
    for b in 0..BLOCKS {
        let pred = y_mean + slope * (xs[b] - x_mean);
        ss_resid += (ys[b] - pred).powi(2);
    }
    let se = (ss_resid / (BLOCKS as f64 - 2.0) / sxx).sqrt();
    (slope / capacity, (4.0 * se / capacity).max(1e-7))
}

fn fct_stats(mut ncfts: Vec<f64>) -> FctStats {
    if ncfts.is_empty() {
        return FctStats::default();
    }
    ncfts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = ncfts.len();
    let mean = ncfts.iter().sum::<f64>() / n as f64;
    let pick = |p: f64| ncfts[((n - 1) as f64 * p).round() as usize];
    FctStats {
        completed: n as u64,
        mean,
        p50: pick(0.5),
        p99: pick(0.99),
    }
}

/// One row of a stability sweep.
#[derive(Debug, Clone)]
pub struct StabilityRow {
    pub load: f64,
    pub matching_fraction: f64,
    pub throughput: f64,
    pub backlog_slope_norm: f64,
    pub backlog_slope_noise: f64,
    pub stable: bool,
    pub short_fct: FctStats,
    pub long_fct: FctStats,
    pub control_total: u64,
}

#[derive(Debug, Clone, Default)]
pub struct StabilityTable {
    pub rows: Vec<StabilityRow>,
}

impl StabilityTable {
    /// Largest load flagged stable, if any.
    pub fn max_stable_load(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.stable)
            .map(|r| r.load)
            .fold(None, |acc, l| Some(acc.map_or(l, |a: f64| a.max(l))))
    }

    /// Supremum of sustainable load estimated from the sweep: loads served
    /// in full count as themselves; overloaded runs contribute their
    /// saturated throughput (the plateau locates the stability boundary).
    pub fn stability_boundary(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| if r.stable { r.load } else { r.throughput })
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "load,matching_fraction,throughput,backlog_slope,noise,stable,fct_short_p50,fct_long_p50,control_total\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.6},{:.6},{:.6e},{:.6e},{},{:.4},{:.4},{}",
                r.load,
                r.matching_fraction,
                r.throughput,
                r.backlog_slope_norm,
                r.backlog_slope_noise,
                r.stable,
                r.short_fct.p50,
                r.long_fct.p50,
                r.control_total
            );
        }
        out
    }
}

/// One run per load, in parallel with disjoint streams. A load is stable
/// iff its offered traffic is served within [`EPS_STAB`] and the backlog
/// shows no positive trend beyond regression noise.
pub fn stability_sweep(
    fabric: &FabricConfig,
    workload: &Workload,
    loads: &[f64],
    seed: RngSeed,
) -> Result<StabilityTable, ConfigError> {
    let rows = loads
        .par_iter()
        .enumerate()
        .map(|(i, &load)| {
            let summary = run_dynsim(fabric, workload, load, seed.derive(domain::REPLICATE, i as u64))?;
            Ok(StabilityRow {
                load,
                matching_fraction: summary.mean_matching_fraction,
                throughput: summary.normalized_throughput,
                backlog_slope_norm: summary.backlog_slope_norm,
                backlog_slope_noise: summary.backlog_slope_noise,
                stable: summary.stable(),
                short_fct: summary.short_fct,
                long_fct: summary.long_fct,
                control_total: summary.control_counts.total(),
            })
        })
        .collect::<Result<_, ConfigError>>()?;
    Ok(StabilityTable { rows })
}
