//! Flag-value parsers. Each returns a small newtype so clap error messages
//! name the offending flag value.

use dbmatch::dynsim::{Algorithm, Workload};
use dbmatch::{ConfigError, DegreeSpec, SelectionRule, ThinningPolicy};

#[derive(Debug, Clone)]
pub struct Deg(pub DegreeSpec);

pub fn degree_spec(s: &str) -> Result<Deg, String> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| format!("`{s}`: expected det:<d> | bin:<n>,<p> | pois:<m>"))?;
    let spec = match kind {
        "det" => DegreeSpec::Deterministic(
            rest.parse::<u32>().map_err(|_| format!("`{rest}` is not a degree"))?,
        ),
        "bin" => {
            let (n, p) = rest
                .split_once(',')
                .ok_or_else(|| format!("`{rest}`: expected bin:<n>,<p>"))?;
            DegreeSpec::Binomial {
                n: n.parse().map_err(|_| format!("`{n}` is not a count"))?,
                p: p.parse().map_err(|_| format!("`{p}` is not a probability"))?,
            }
        }
        "pois" => DegreeSpec::Poisson {
            mean: rest.parse().map_err(|_| format!("`{rest}` is not a mean"))?,
        },
        other => return Err(format!("unknown degree kind `{other}`")),
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(Deg(spec))
}

#[derive(Debug, Clone, Copy)]
pub struct Thin(pub ThinningPolicy);

pub fn thinning(s: &str) -> Result<Thin, String> {
    let policy = match s {
        "none" => ThinningPolicy::None,
        _ => match s.split_once(':') {
            Some(("bern", q)) => ThinningPolicy::Bernoulli(
                q.parse().map_err(|_| format!("`{q}` is not a probability"))?,
            ),
            Some(("max", k)) => {
                ThinningPolicy::MaxK(k.parse().map_err(|_| format!("`{k}` is not a count"))?)
            }
            _ => return Err(format!("`{s}`: expected none | bern:<q> | max:<k>")),
        },
    };
    policy.validate().map_err(|e| e.to_string())?;
    Ok(Thin(policy))
}

#[derive(Debug, Clone, Copy)]
pub enum RuleKind {
    Selection(SelectionRule),
    Islip,
}

#[derive(Debug, Clone, Copy)]
pub struct Rule(pub RuleKind);

pub fn rule(s: &str) -> Result<Rule, String> {
    let kind = match s {
        "uniform" => RuleKind::Selection(SelectionRule::DbUniform),
        "greedy" => RuleKind::Selection(SelectionRule::DbGreedy),
        "islip" => RuleKind::Islip,
        _ => match s.split_once(':') {
            Some(("db", a)) => {
                let alpha: f64 = a.parse().map_err(|_| format!("`{a}` is not an exponent"))?;
                if alpha > 0.0 {
                    return Err(format!("db exponent must be <= 0, got {alpha}"));
                }
                RuleKind::Selection(SelectionRule::DbAlpha(alpha))
            }
            _ => return Err(format!("`{s}`: expected db:<alpha> | uniform | greedy | islip")),
        },
    };
    Ok(Rule(kind))
}

#[derive(Debug, Clone, Copy)]
pub struct Algo(pub Algorithm);

pub fn algorithm(s: &str) -> Result<Algo, String> {
    match s {
        "2cgs" => Ok(Algo(Algorithm::TwoCgs)),
        "1rdcpim" => Ok(Algo(Algorithm::OneRoundDcPim)),
        "islip" => Ok(Algo(Algorithm::Islip)),
        _ => Err(format!("`{s}`: expected 2cgs | 1rdcpim | islip")),
    }
}

/// `<start>:<stop>:<step>` numeric grid.
#[derive(Debug, Clone, Copy)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step).round() as usize;
        (0..=count)
            .map(|i| ((self.start + i as f64 * self.step) * 1e9).round() / 1e9)
            .collect()
    }
}

pub fn grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("`{s}`: expected <start>:<stop>:<step>"));
    }
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
    let g = Grid {
        start: num(parts[0])?,
        stop: num(parts[1])?,
        step: num(parts[2])?,
    };
    if !g.step.is_finite() || g.step <= 0.0 || g.start > g.stop {
        return Err(format!("`{s}`: empty or descending grid"));
    }
    Ok(g)
}

pub fn workload(s: &str, bdp: f64) -> Result<Workload, ConfigError> {
    match s {
        "imc10-like" => Ok(Workload::imc10_like(bdp)),
        "sgd-like" => Ok(Workload::sgd_like(bdp)),
        _ => {
            if let Some(path) = s.strip_prefix("file:") {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    ConfigError::invalid(format!("cannot read workload file `{path}`: {e}"))
                })?;
                Workload::from_table(path, &text)
            } else {
                Err(ConfigError::invalid(format!(
                    "unknown workload `{s}` (expected imc10-like | sgd-like | file:<path>)"
                )))
            }
        }
    }
}
