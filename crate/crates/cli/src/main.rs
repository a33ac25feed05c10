//! Command-line front end: graph generation, single matching rounds,
//! closed-form evaluators, Monte Carlo experiments, and the fabric
//! simulator, plus a preset registry covering the standard reproduction
//! tables and figures.

mod parse;
mod presets;

use clap::{Args, Parser, Subcommand};
use dbmatch::dynsim::{run_dynsim, stability_sweep, FabricConfig};
use dbmatch::experiments::{
    find_alpha_star, max_matching_baseline, run_replicates, sweep_alpha, AlphaGrid,
    ExperimentConfig,
};
use dbmatch::matching::{islip_round, run_round, IslipState, MatchResult};
use dbmatch::theory;
use dbmatch::{generate_dout, thin, BipartiteGraph, ConfigError, RngSeed};
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dbmatch", version, about = "Degree-biased bipartite matching toolkit")]
struct Cli {
    /// Base RNG seed; identical seeds reproduce identical output
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Worker threads (0 = machine parallelism). Experiments and load
    /// sweeps are bit-identical at any thread count.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a D-out random bipartite graph and dump it as text
    Generate(GenerateArgs),
    /// Run one matching round on a graph file
    #[command(name = "match")]
    Match(MatchArgs),
    /// Evaluate a closed-form expression
    Theory(TheoryArgs),
    /// Monte Carlo matching experiments (CSV output)
    Experiment(ExperimentArgs),
    /// Slotted flow-level fabric simulation
    Dynsim(DynsimArgs),
    /// List available presets
    Presets,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 144)]
    n: usize,
    /// Out-degree law: det:<d> | bin:<n>,<p> | pois:<m>
    #[arg(long, value_parser = parse::degree_spec)]
    deg: parse::Deg,
    /// Thinning applied after generation: none | bern:<q> | max:<k>
    #[arg(long, value_parser = parse::thinning, default_value = "none")]
    thin: parse::Thin,
    /// Write the graph text here instead of stdout
    #[arg(long)]
    dump_graph: Option<PathBuf>,
}

#[derive(Args)]
struct MatchArgs {
    /// Graph file produced by `generate`
    #[arg(long)]
    graph: PathBuf,
    /// db:<alpha> | uniform | greedy | islip
    #[arg(long, value_parser = parse::rule)]
    rule: parse::Rule,
}

#[derive(Args)]
struct TheoryArgs {
    /// uniform | uniform-limit | greedy-bound | f
    #[arg(long)]
    formula: String,
    #[arg(long, value_parser = parse::degree_spec)]
    deg: parse::Deg,
    /// System size for the finite-N formula
    #[arg(long, default_value_t = 144)]
    n: usize,
    /// Receiver degree argument of f(s)
    #[arg(long, default_value_t = 1)]
    s: u64,
    /// Series truncation: stop once the residual weight drops below this
    #[arg(long, default_value_t = 1e-12)]
    tail_tol: f64,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Named preset (see `presets`); scale can be overridden with --reps
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 144)]
    n: usize,
    /// Replicates per configuration
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    #[arg(long, value_parser = parse::degree_spec, default_value = "det:2")]
    deg: parse::Deg,
    #[arg(long, value_parser = parse::thinning, default_value = "none")]
    thin: parse::Thin,
    /// db:<alpha> | uniform | greedy (ignored when --alpha-grid is given)
    #[arg(long, value_parser = parse::rule, default_value = "uniform")]
    rule: parse::Rule,
    /// Sweep DB(alpha) over <start>:<stop>:<step> instead of one rule
    #[arg(long, value_parser = parse::grid)]
    alpha_grid: Option<parse::Grid>,
    /// Also report the maximum-matching baseline
    #[arg(long)]
    max_matching: bool,
    /// Find the grid argmax (uses --alpha-grid or the default search grid)
    #[arg(long)]
    alpha_star: bool,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DynsimArgs {
    /// Named preset (fig7 | fig8); scale can be overridden with --slots
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 144)]
    hosts: usize,
    /// 2cgs | 1rdcpim | islip
    #[arg(long, value_parser = parse::algorithm, default_value = "2cgs")]
    algo: parse::Algo,
    /// imc10-like | sgd-like | file:<path>
    #[arg(long, default_value = "imc10-like")]
    workload: String,
    /// Offered load in (0, 1)
    #[arg(long)]
    load: Option<f64>,
    /// Load sweep <start>:<stop>:<step>; emits a stability table
    #[arg(long, value_parser = parse::grid)]
    load_grid: Option<parse::Grid>,
    /// Simulated slots
    #[arg(long, default_value_t = 30_000)]
    slots: usize,
    #[arg(long, default_value_t = 10_000)]
    warmup: usize,
    /// Write the per-slot CSV (slot,matched,served_bytes,backlog) here
    #[arg(long)]
    slot_csv: Option<PathBuf>,
    /// Write the main output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: failed to configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

enum CliError {
    Config(String),
    Io(std::io::Error),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let seed = RngSeed::new(cli.seed);
    match cli.cmd {
        Cmd::Generate(a) => {
            let g = generate_dout(a.n, &a.deg.0, seed)?;
            let g = thin(&g, a.thin.0, seed.derive(dbmatch::rng::domain::THIN, 0));
            emit(a.dump_graph.as_ref(), &g.dump_text())
        }
        Cmd::Match(a) => {
            let text = std::fs::read_to_string(&a.graph)?;
            let g = BipartiteGraph::parse_text(&text)?;
            let result = match a.rule.0 {
                parse::RuleKind::Selection(rule) => run_round(&g, rule, seed),
                parse::RuleKind::Islip => {
                    let mut state = IslipState::new(g.n_senders());
                    islip_round(&g, &mut state)
                }
            };
            emit(None, &(render_match(&result) + "\n"))
        }
        Cmd::Theory(a) => {
            let deg = &a.deg.0;
            match a.formula.as_str() {
                "uniform" => {
                    let v = theory::mean_match_uniform(a.n, deg.prob_zero());
                    emit(None, &format!("{v:.12}\n"))
                }
                "uniform-limit" => {
                    let v = theory::mean_match_uniform_limit(deg)?;
                    emit(None, &format!("{v:.12}\n"))
                }
                "greedy-bound" => {
                    let b = theory::mean_match_greedy_bound(deg, a.tail_tol)?;
                    emit(
                        None,
                        &format!(
                            "{:.12}\nterms={} tail_mass={:.3e}\n",
                            b.value, b.terms, b.tail_mass
                        ),
                    )
                }
                "f" => {
                    let v = theory::greedy_f(a.s, deg)?;
                    emit(None, &format!("{v:.12}\n"))
                }
                other => Err(CliError::Config(format!(
                    "unknown --formula `{other}` (expected uniform|uniform-limit|greedy-bound|f)"
                ))),
            }
        }
        Cmd::Experiment(a) => {
            if let Some(name) = &a.preset {
                let csv = presets::run_experiment_preset(name, a.reps, seed)
                    .ok_or_else(|| CliError::Config(format!("unknown preset `{name}`")))??;
                return emit(a.out.as_ref(), &csv);
            }
            let cfg = ExperimentConfig {
                n: a.n,
                replicates: a.reps,
                deg: a.deg.0.clone(),
                thinning: a.thin.0,
                rule: match a.rule.0 {
                    parse::RuleKind::Selection(rule) => rule,
                    parse::RuleKind::Islip => {
                        return Err(CliError::Config(
                            "islip is a dynsim algorithm; experiment rules are db:<alpha>|uniform|greedy"
                                .into(),
                        ))
                    }
                },
                base_seed: seed,
            };
            if a.alpha_star {
                let grid = a
                    .alpha_grid
                    .map(|g| AlphaGrid { start: g.start, stop: g.stop, step: g.step })
                    .unwrap_or_else(AlphaGrid::argmax_default);
                let (star, value) = find_alpha_star(&cfg, &grid)?;
                return emit(a.out.as_ref(), &format!("alpha_star,value\n{star},{value:.6}\n"));
            }
            let mut csv = if let Some(g) = a.alpha_grid {
                let grid = AlphaGrid { start: g.start, stop: g.stop, step: g.step };
                sweep_alpha(&cfg, &grid)?.to_csv()
            } else {
                run_replicates(&cfg)?.to_csv()
            };
            if a.max_matching {
                let row = &max_matching_baseline(&cfg)?.rows[0];
                csv.push_str(&format!(
                    "maxmatch,{:.6},{:.6},{:.6},{:.6},\n",
                    row.mean, row.q1, row.q3, row.stderr
                ));
            }
            emit(a.out.as_ref(), &csv)
        }
        Cmd::Dynsim(a) => {
            if let Some(name) = &a.preset {
                let csv = presets::run_dynsim_preset(name, a.slots, a.warmup, seed)
                    .ok_or_else(|| CliError::Config(format!("unknown preset `{name}`")))??;
                return emit(a.out.as_ref(), &csv);
            }
            let fabric = FabricConfig {
                n_hosts: a.hosts,
                algorithm: a.algo.0,
                horizon: a.slots,
                warmup: a.warmup,
                ..FabricConfig::defaults(a.algo.0)
            };
            let workload = parse::workload(&a.workload, fabric.bdp_bytes() as f64)?;
            if let Some(g) = a.load_grid {
                let loads = g.values();
                let table = stability_sweep(&fabric, &workload, &loads, seed)?;
                return emit(a.out.as_ref(), &table.to_csv());
            }
            let load = a
                .load
                .ok_or_else(|| CliError::Config("one of --load or --load-grid is required".into()))?;
            let summary = run_dynsim(&fabric, &workload, load, seed)?;
            if let Some(path) = &a.slot_csv {
                std::fs::write(path, summary.slots_csv())?;
            }
            emit(a.out.as_ref(), &render_summary(&summary))
        }
        Cmd::Presets => emit(None, &presets::listing()),
    }
}

/// Structured-text MatchResult with the documented fields only.
fn render_match(r: &MatchResult) -> String {
    serde_json::to_string_pretty(&serde_json::json!({
        "pairs": r.pairs,
        "matched_fraction": r.matched_fraction,
        "control_counts": r.control_counts,
    }))
    .expect("serializable")
}

fn render_summary(s: &dbmatch::dynsim::RunSummary) -> String {
    let mut out = String::new();
    out.push_str(&format!("algorithm: {}\n", s.algorithm.name()));
    out.push_str(&format!("workload: {}\n", s.workload));
    out.push_str(&format!("load: {}\n", s.load));
    out.push_str(&format!("slots: {} (warmup {})\n", s.horizon, s.warmup));
    out.push_str(&format!(
        "mean_matching_fraction: {:.6}\n",
        s.mean_matching_fraction
    ));
    out.push_str(&format!(
        "normalized_throughput: {:.6}\n",
        s.normalized_throughput
    ));
    out.push_str(&format!(
        "control_counts: notify={} req={} grant={} accept={}\n",
        s.control_counts.notify, s.control_counts.req, s.control_counts.grant, s.control_counts.accept
    ));
    let fct = |name: &str, f: &dbmatch::dynsim::FctStats| {
        format!(
            "fct_{name}: completed={} mean={:.4} p50={:.4} p99={:.4}\n",
            f.completed, f.mean, f.p50, f.p99
        )
    };
    out.push_str(&fct("short", &s.short_fct));
    out.push_str(&fct("long", &s.long_fct));
    out.push_str(&format!(
        "backlog: final_bytes={} slope_norm={:.3e} noise={:.3e}\n",
        s.final_backlog_bytes, s.backlog_slope_norm, s.backlog_slope_noise
    ));
    out.push_str(&format!("stable: {}\n", s.stable()));
    for w in &s.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    out
}
