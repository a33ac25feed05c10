//! Single-round bipartite matching under communication constraints.
//!
//! This crate implements a family of decentralized matching algorithms for
//! `N x N` sender/receiver systems in which each sender issues exactly one
//! grant per round, informed only by the degrees of its neighbors:
//!
//! - [`graph`]: D-out random bipartite graphs with pluggable sender
//!   out-degree distributions.
//! - [`thinning`]: Bernoulli and max(k) edge sparsification, applied to a
//!   feasible graph before matching.
//! - [`matching`]: the NOTIFY/REQ/GRANT/ACCEPT round with degree-biased
//!   selection rules, an iSLIP round-robin baseline, and a Hopcroft-Karp
//!   maximum-matching bound.
//! - [`theory`]: closed-form evaluators for the mean matching fraction
//!   (uniform selection exactly, greedy selection as an asymptotic series).
//! - [`experiments`]: a seeded Monte Carlo harness with common random
//!   numbers for alpha sweeps and argmax searches.
//! - [`dynsim`]: a slotted flow-level simulator of matching-based long
//!   message scheduling on a non-blocking fabric, for throughput, FCT and
//!   stability-region studies.
//!
//! All randomness flows through [`rng::RngSeed`]; identical seeds reproduce
//! identical results regardless of thread count.

pub mod dynsim;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod matching;
pub mod rng;
pub mod theory;
pub mod thinning;

pub use error::ConfigError;
pub use graph::{generate_dout, receiver_degrees, BipartiteGraph, DegreeSpec};
pub use matching::{
    db_grant_pmf, islip_round, max_matching, run_round, ControlCounts, IslipState, MatchResult,
    SelectionRule,
};
pub use rng::RngSeed;
pub use thinning::{thin, ThinningPolicy};
