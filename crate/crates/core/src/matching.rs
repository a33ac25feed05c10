//! One-round NOTIFY/REQ/GRANT/ACCEPT matching with pluggable grant rules.
//!
//! Every sender with a nonempty neighborhood issues exactly one grant to a
//! neighbor chosen according to a [`SelectionRule`]; every receiver holding
//! at least one grant accepts exactly one, uniformly at random. A receiver
//! is therefore matched iff it receives at least one grant. Receiver degrees
//! are those of the intention graph handed to [`run_round`]: thin first,
//! match second.
//!
//! Also provided: a deterministic one-iteration iSLIP round with persistent
//! round-robin state, and a Hopcroft-Karp maximum matching used as the
//! omniscient baseline.

use crate::graph::{receiver_degrees, BipartiteGraph};
use crate::rng::{domain, RngSeed};
use serde::Serialize;
use std::collections::VecDeque;

/// Grant-selection rule used at the GRANT stage.
///
/// `DbAlpha(alpha)` picks neighbor `v` with probability proportional to
/// `deg(v)^alpha`; `DbUniform` is exactly `DbAlpha(0)`; `DbGreedy` is the
/// `alpha -> -inf` limit implemented exactly (uniform among minimum-degree
/// neighbors), never as a large negative exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SelectionRule {
    DbAlpha(f64),
    DbUniform,
    DbGreedy,
}

/// Messages exchanged in one round, by protocol stage. Degree information
/// rides on the REQ messages at no extra message cost.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ControlCounts {
    pub notify: u64,
    pub req: u64,
    pub grant: u64,
    pub accept: u64,
}

impl ControlCounts {
    pub fn total(&self) -> u64 {
        self.notify + self.req + self.grant + self.accept
    }

    pub fn add(&mut self, other: &ControlCounts) {
        self.notify += other.notify;
        self.req += other.req;
        self.grant += other.grant;
        self.accept += other.accept;
    }
}

/// Outcome of one matching round.
#[derive(Debug, Clone, Serialize)]
pub struct MatchResult {
    /// Matched (sender, receiver) pairs, ascending by receiver.
    pub pairs: Vec<(u32, u32)>,
    /// Chosen grant target per sender.
    pub grants: Vec<Option<u32>>,
    pub control_counts: ControlCounts,
    /// `|pairs| / n_receivers`.
    pub matched_fraction: f64,
}

/// Grant pmf of sender `u` under `DB(alpha)`, aligned with
/// `g.neighbors(u)`. Returns `None` when `u` has no neighbors (the sender
/// issues nothing). Computed in log space so strongly negative `alpha`
/// stays finite.
pub fn db_grant_pmf(g: &BipartiteGraph, u: usize, alpha: f64) -> Option<Vec<f64>> {
    let rdeg = receiver_degrees(g);
    let nbrs = g.neighbors(u);
    if nbrs.is_empty() {
        return None;
    }
    let mut pmf = vec![0.0; nbrs.len()];
    fill_pmf(SelectionRule::DbAlpha(alpha), nbrs, &rdeg, &mut pmf);
    Some(pmf)
}

/// Write the grant pmf for `nbrs` into `pmf` (same length).
fn fill_pmf(rule: SelectionRule, nbrs: &[u32], rdeg: &[u32], pmf: &mut [f64]) {
    match rule {
        // DB(0) is uniform selection exactly; share the code path so the
        // two rule spellings draw identically
        SelectionRule::DbUniform => pmf.fill(1.0 / nbrs.len() as f64),
        SelectionRule::DbAlpha(alpha) => {
            if alpha == 0.0 {
                pmf.fill(1.0 / nbrs.len() as f64);
                return;
            }
            // softmax of alpha * ln(deg) with max subtraction
            let mut max_w = f64::NEG_INFINITY;
            for (i, &v) in nbrs.iter().enumerate() {
                let w = alpha * f64::from(rdeg[v as usize]).ln();
                pmf[i] = w;
                if w > max_w {
                    max_w = w;
                }
            }
            let mut sum = 0.0;
            for p in pmf.iter_mut() {
                *p = (*p - max_w).exp();
                sum += *p;
            }
            for p in pmf.iter_mut() {
                *p /= sum;
            }
        }
        SelectionRule::DbGreedy => {
            let min_deg = nbrs.iter().map(|&v| rdeg[v as usize]).min().unwrap();
            let ties = nbrs
                .iter()
                .filter(|&&v| rdeg[v as usize] == min_deg)
                .count();
            let w = 1.0 / ties as f64;
            for (i, &v) in nbrs.iter().enumerate() {
                pmf[i] = if rdeg[v as usize] == min_deg { w } else { 0.0 };
            }
        }
    }
}

/// Sample an index from `pmf` by inverting the cumulative sum at `r`.
fn sample_pmf(pmf: &[f64], r: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in pmf.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = i;
            if r < acc {
                return i;
            }
        }
    }
    last
}

/// Run one matching round on the intention graph. Equivalent to
/// [`run_round_at`] with round index 0.
pub fn run_round(g: &BipartiteGraph, rule: SelectionRule, seed: RngSeed) -> MatchResult {
    run_round_at(g, rule, seed, 0)
}

/// Run one matching round, keying grant draws by `(round, sender)` and
/// accept draws by `(round, receiver)` so results are independent of
/// iteration order and reusable across pipelined slots.
pub fn run_round_at(
    g: &BipartiteGraph,
    rule: SelectionRule,
    seed: RngSeed,
    round: u64,
) -> MatchResult {
    let n_send = g.n_senders();
    let n_recv = g.n_receivers();
    let rdeg = receiver_degrees(g);

    let mut grants: Vec<Option<u32>> = vec![None; n_send];
    let mut granters: Vec<Vec<u32>> = vec![Vec::new(); n_recv];
    let mut pmf_buf: Vec<f64> = Vec::new();
    let mut notify = 0u64;
    let mut grant_msgs = 0u64;
    for (u, grant) in grants.iter_mut().enumerate() {
        let nbrs = g.neighbors(u);
        notify += nbrs.len() as u64;
        if nbrs.is_empty() {
            continue;
        }
        grant_msgs += 1;
        pmf_buf.resize(nbrs.len(), 0.0);
        fill_pmf(rule, nbrs, &rdeg, &mut pmf_buf);
        let r = seed.keyed(domain::GRANT, round, u as u64).next_f64();
        let v = nbrs[sample_pmf(&pmf_buf, r)];
        *grant = Some(v);
        granters[v as usize].push(u as u32);
    }

    let mut pairs = Vec::new();
    for (v, cand) in granters.iter().enumerate() {
        if cand.is_empty() {
            continue;
        }
        let idx = seed
            .keyed(domain::ACCEPT, round, v as u64)
            .index_below(cand.len());
        pairs.push((cand[idx], v as u32));
    }

    let control_counts = ControlCounts {
        notify,
        req: notify,
        grant: grant_msgs,
        accept: pairs.len() as u64,
    };
    let matched_fraction = pairs.len() as f64 / n_recv as f64;
    MatchResult {
        pairs,
        grants,
        control_counts,
        matched_fraction,
    }
}

/// Round-robin arbitration state for iSLIP, persistent across rounds.
///
/// Each host owns a fixed arbitration order over its peers; pointers index
/// positions in that order. [`IslipState::new`] uses the index order on
/// both sides (the classic crossbar arbiter); [`IslipState::with_orders`]
/// draws an independent fixed random order per host, which models hosts
/// that arbitrate without a shared port numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IslipState {
    /// Per-receiver grant pointer: a position in that receiver's order.
    pub grant_ptr: Vec<u32>,
    /// Per-sender accept pointer: a position in that sender's order.
    pub accept_ptr: Vec<u32>,
    /// Per-host arbitration orders; `None` means index order everywhere.
    orders: Option<ArbitrationOrders>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ArbitrationOrders {
    /// recv_order[v][pos] = sender id at that priority position.
    recv_order: Vec<Vec<u32>>,
    /// recv_rank[v][s] = position of sender s in receiver v's order.
    recv_rank: Vec<Vec<u32>>,
    send_order: Vec<Vec<u32>>,
    send_rank: Vec<Vec<u32>>,
}

impl IslipState {
    pub fn new(n: usize) -> Self {
        IslipState {
            grant_ptr: vec![0; n],
            accept_ptr: vec![0; n],
            orders: None,
        }
    }

    /// Fresh state with an independent uniform arbitration order per host.
    pub fn with_orders(n: usize, seed: RngSeed) -> Self {
        use rand::seq::SliceRandom;
        let mut rng = seed.chacha();
        let mut draw = || -> Vec<Vec<u32>> {
            (0..n)
                .map(|_| {
                    let mut order: Vec<u32> = (0..n as u32).collect();
                    order.shuffle(&mut rng);
                    order
                })
                .collect()
        };
        let recv_order = draw();
        let send_order = draw();
        let rank = |orders: &[Vec<u32>]| -> Vec<Vec<u32>> {
            orders
                .iter()
                .map(|ord| {
                    let mut rank = vec![0u32; n];
                    for (pos, &id) in ord.iter().enumerate() {
                        rank[id as usize] = pos as u32;
                    }
                    rank
                })
                .collect()
        };
        let recv_rank = rank(&recv_order);
        let send_rank = rank(&send_order);
        IslipState {
            grant_ptr: vec![0; n],
            accept_ptr: vec![0; n],
            orders: Some(ArbitrationOrders {
                recv_order,
                recv_rank,
                send_order,
                send_rank,
            }),
        }
    }

    /// Priority position of sender `s` in receiver `v`'s order.
    fn recv_rank(&self, v: usize, s: u32) -> u32 {
        match &self.orders {
            None => s,
            Some(o) => o.recv_rank[v][s as usize],
        }
    }

    fn send_rank(&self, u: usize, v: u32) -> u32 {
        match &self.orders {
            None => v,
            Some(o) => o.send_rank[u][v as usize],
        }
    }

    /// Candidate with the first position at or cyclically after `ptr` in
    /// the host's order. `candidates` is ascending by peer id.
    fn pick_recv(&self, v: usize, candidates: &[u32], ptr: u32) -> u32 {
        match &self.orders {
            None => cyclic_first(candidates, ptr),
            Some(_) => {
                let n = self.grant_ptr.len() as u32;
                candidates
                    .iter()
                    .copied()
                    .min_by_key(|&s| (self.recv_rank(v, s) + n - ptr) % n)
                    .expect("candidates nonempty")
            }
        }
    }

    fn pick_send(&self, u: usize, candidates: &[u32], ptr: u32) -> u32 {
        match &self.orders {
            None => cyclic_first(candidates, ptr),
            Some(_) => {
                let n = self.accept_ptr.len() as u32;
                candidates
                    .iter()
                    .copied()
                    .min_by_key(|&v| (self.send_rank(u, v) + n - ptr) % n)
                    .expect("candidates nonempty")
            }
        }
    }
}

/// First element of `sorted` at or cyclically after `ptr`.
fn cyclic_first(sorted: &[u32], ptr: u32) -> u32 {
    let i = sorted.partition_point(|&x| x < ptr);
    if i < sorted.len() {
        sorted[i]
    } else {
        sorted[0]
    }
}

/// One request/grant/accept iteration of iSLIP on the feasible graph.
///
/// Senders request all their neighbors; each receiver grants the first
/// requesting sender at or after its grant pointer in its own arbitration
/// order; each sender accepts the first granting receiver at or after its
/// accept pointer in its own order. A receiver's pointer advances (to one
/// past the granted sender's position) only when its grant is
/// accepted. Sender pointers advance unconditionally: to one past the
/// accepted receiver, or by a single position for requesting senders that
/// received no grant. Senders with no pending edges do not arbitrate and
/// keep their pointer.
///
/// Control counts: the request stage is charged as REQ (one per edge), the
/// NOTIFY stage is unused by this sender-driven protocol.
pub fn islip_round(g: &BipartiteGraph, state: &mut IslipState) -> MatchResult {
    let n_send = g.n_senders();
    let n_recv = g.n_receivers();
    assert_eq!(state.grant_ptr.len(), n_recv);
    assert_eq!(state.accept_ptr.len(), n_send);

    // requesters per receiver, ascending because senders are scanned in order
    let mut requesters: Vec<Vec<u32>> = vec![Vec::new(); n_recv];
    let mut req = 0u64;
    for u in 0..n_send {
        req += g.sender_degree(u) as u64;
        for &v in g.neighbors(u) {
            requesters[v as usize].push(u as u32);
        }
    }

    let mut grant_msgs = 0u64;
    let mut granted_sender: Vec<Option<u32>> = vec![None; n_recv];
    let mut offers: Vec<Vec<u32>> = vec![Vec::new(); n_send];
    for v in 0..n_recv {
        if requesters[v].is_empty() {
            continue;
        }
        grant_msgs += 1;
        let s = state.pick_recv(v, &requesters[v], state.grant_ptr[v]);
        granted_sender[v] = Some(s);
        offers[s as usize].push(v as u32);
    }

    let mut pairs_by_sender: Vec<Option<u32>> = vec![None; n_send];
    for u in 0..n_send {
        if offers[u].is_empty() {
            // unconditional advance for senders that requested but got no
            // grant; idle senders (no pending edges) stay put
            if g.sender_degree(u) > 0 {
                state.accept_ptr[u] = (state.accept_ptr[u] + 1) % n_recv as u32;
            }
            continue;
        }
        let v = state.pick_send(u, &offers[u], state.accept_ptr[u]);
        pairs_by_sender[u] = Some(v);
        state.accept_ptr[u] = (state.send_rank(u, v) + 1) % n_recv as u32;
    }

    let mut pairs = Vec::new();
    for (v, granted) in granted_sender.iter().enumerate() {
        if let Some(s) = *granted {
            if pairs_by_sender[s as usize] == Some(v as u32) {
                pairs.push((s, v as u32));
                state.grant_ptr[v] = (state.recv_rank(v, s) + 1) % n_send as u32;
            }
        }
    }

    let control_counts = ControlCounts {
        notify: 0,
        req,
        grant: grant_msgs,
        accept: pairs.len() as u64,
    };
    let matched_fraction = pairs.len() as f64 / n_recv as f64;
    MatchResult {
        pairs,
        grants: pairs_by_sender,
        control_counts,
        matched_fraction,
    }
}

/// Maximum-cardinality matching size via Hopcroft-Karp, O(E sqrt(V)).
pub fn max_matching(g: &BipartiteGraph) -> usize {
    const NIL: u32 = u32::MAX;
    const INF: u32 = u32::MAX;
    let n = g.n_senders();
    let m = g.n_receivers();
    let mut match_u: Vec<u32> = vec![NIL; n];
    let mut match_v: Vec<u32> = vec![NIL; m];
    let mut dist: Vec<u32> = vec![INF; n];
    let mut queue = VecDeque::new();

    fn try_augment(
        g: &BipartiteGraph,
        u: usize,
        match_u: &mut [u32],
        match_v: &mut [u32],
        dist: &mut [u32],
    ) -> bool {
        let d = std::mem::replace(&mut dist[u], u32::MAX);
        for &v in g.neighbors(u) {
            let w = match_v[v as usize];
            let free = w == u32::MAX;
            if free
                || (dist[w as usize] == d + 1
                    && try_augment(g, w as usize, match_u, match_v, dist))
            {
                match_v[v as usize] = u as u32;
                match_u[u] = v;
                return true;
            }
        }
        false
    }

    loop {
        // BFS layering from free senders
        queue.clear();
        for u in 0..n {
            if match_u[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut reachable_free = false;
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                let w = match_v[v as usize];
                if w == NIL {
                    reachable_free = true;
                } else if dist[w as usize] == INF {
                    dist[w as usize] = dist[u] + 1;
                    queue.push_back(w as usize);
                }
            }
        }
        if !reachable_free {
            break;
        }
        let mut augmented = false;
        for u in 0..n {
            if match_u[u] == NIL
                && dist[u] == 0
                && try_augment(g, u, &mut match_u, &mut match_v, &mut dist)
            {
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }
    match_u.iter().filter(|&&v| v != NIL).count()
}
