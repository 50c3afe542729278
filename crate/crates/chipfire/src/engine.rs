//! The step operator, firing indicator, and transient/period detection.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("config length {got} != {expected} vertices")]
    LengthMismatch { got: usize, expected: usize },
    #[error("vertex {v} out of range (n = {n})")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("no recurrence within {rounds} rounds; the budget is too small, this is not evidence of aperiodicity")]
    BudgetExceeded { rounds: usize },
    #[error("invalid chip config: {0}")]
    Parse(String),
}

/// Per-vertex nonnegative chip counts. The total is conserved by [`step`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ChipConfig(Vec<u64>);

impl ChipConfig {
    pub fn new(chips: Vec<u64>) -> Self {
        ChipConfig(chips)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn chips(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl std::ops::Index<usize> for ChipConfig {
    type Output = u64;
    fn index(&self, v: usize) -> &u64 {
        &self.0[v]
    }
}

impl fmt::Display for ChipConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for ChipConfig {
    type Err = EngineError;

    /// Parses the text form `"2,2,0"`; order matches vertex indices.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chips = s
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| EngineError::Parse(format!("{:?}: {}", s, e)))?;
        if chips.is_empty() {
            return Err(EngineError::Parse("empty config".into()));
        }
        Ok(ChipConfig(chips))
    }
}

/// Detected eventual cycle of a game: transient length `t0`, minimal period
/// `T`, the `T` configurations on the cycle, and the `T x n` firing matrix
/// with rounds indexed relative to `t0`.
#[derive(Clone, Debug)]
pub struct CycleSummary {
    t0: usize,
    period: usize,
    cycle_configs: Vec<ChipConfig>,
    firing: Vec<Vec<bool>>,
    n: usize,
    graph_fingerprint: u64,
}

impl CycleSummary {
    pub fn t0(&self) -> usize {
        self.t0
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn cycle_configs(&self) -> &[ChipConfig] {
        &self.cycle_configs
    }

    /// `F_{t0+t}(v)` for `0 <= t < T`.
    pub fn fires_at(&self, t: usize, v: usize) -> bool {
        self.firing[t][v]
    }

    pub fn firing_row(&self, t: usize) -> &[bool] {
        &self.firing[t]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total chips, conserved along the whole game.
    pub fn total(&self) -> u64 {
        self.cycle_configs[0].total()
    }

    /// Number of times `v` fires over one cycle.
    pub fn firings_of(&self, v: usize) -> u64 {
        self.firing.iter().filter(|row| row[v]).count() as u64
    }

    /// Rounds `t` (relative to `t0`) at which `v` fires.
    pub fn firing_rounds(&self, v: usize) -> Vec<usize> {
        (0..self.period).filter(|&t| self.firing[t][v]).collect()
    }

    pub fn matches_graph(&self, g: &Graph) -> bool {
        self.graph_fingerprint == g.fingerprint()
    }

    fn from_parts(g: &Graph, t0: usize, configs: Vec<Vec<u64>>) -> Self {
        let period = configs.len();
        let firing: Vec<Vec<bool>> = configs
            .iter()
            .map(|c| (0..g.n()).map(|v| c[v] >= g.degree(v) as u64).collect())
            .collect();
        CycleSummary {
            t0,
            period,
            cycle_configs: configs.into_iter().map(ChipConfig).collect(),
            firing,
            n: g.n(),
            graph_fingerprint: g.fingerprint(),
        }
    }
}

pub fn check_config(g: &Graph, sigma: &ChipConfig) -> Result<(), EngineError> {
    if sigma.len() != g.n() {
        return Err(EngineError::LengthMismatch {
            got: sigma.len(),
            expected: g.n(),
        });
    }
    Ok(())
}

/// True iff `v` fires from `sigma`: it holds at least `deg(v)` chips.
pub fn fires(g: &Graph, sigma: &ChipConfig, v: usize) -> Result<bool, EngineError> {
    check_config(g, sigma)?;
    if v >= g.n() {
        return Err(EngineError::VertexOutOfRange { v, n: g.n() });
    }
    Ok(sigma[v] >= g.degree(v) as u64)
}

/// One round of parallel firing: every vertex with `sigma(v) >= deg(v)`
/// sends one chip to each neighbor simultaneously.
pub fn step(g: &Graph, sigma: &ChipConfig) -> ChipConfig {
    debug_assert_eq!(sigma.len(), g.n());
    ChipConfig(step_raw(g, sigma.chips()))
}

fn step_raw(g: &Graph, cur: &[u64]) -> Vec<u64> {
    let n = g.n();
    let firing: Vec<bool> = (0..n).map(|v| cur[v] >= g.degree(v) as u64).collect();
    let mut next = Vec::with_capacity(n);
    for v in 0..n {
        let mut x = cur[v];
        if firing[v] {
            x -= g.degree(v) as u64;
        }
        x += g.neighbors(v).iter().filter(|&&u| firing[u]).count() as u64;
        next.push(x);
    }
    next
}

#[derive(Clone, Debug)]
pub struct CycleOptions {
    /// Maximum rounds to simulate before giving up with a diagnostic.
    pub max_rounds: usize,
    /// Use the constant-memory power-of-two teleporting-tortoise detector
    /// instead of the round-indexed map.
    pub low_memory: bool,
}

impl Default for CycleOptions {
    fn default() -> Self {
        CycleOptions {
            max_rounds: 1_000_000,
            low_memory: false,
        }
    }
}

/// Simulates until the configuration recurs and returns the cycle summary.
pub fn find_cycle(
    g: &Graph,
    sigma: &ChipConfig,
    max_rounds: usize,
) -> Result<CycleSummary, EngineError> {
    find_cycle_with(
        g,
        sigma,
        &CycleOptions {
            max_rounds,
            low_memory: false,
        },
    )
}

pub fn find_cycle_with(
    g: &Graph,
    sigma: &ChipConfig,
    opts: &CycleOptions,
) -> Result<CycleSummary, EngineError> {
    check_config(g, sigma)?;
    if opts.low_memory {
        return find_cycle_brent(g, sigma, opts.max_rounds);
    }
    // Round-indexed map: first repeat gives t0 and the minimal T directly.
    // Hash buckets verify full equality, so collisions cannot be mistaken
    // for recurrences.
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut history: Vec<Vec<u64>> = Vec::new();
    let mut cur = sigma.chips().to_vec();
    seen.insert(cur.clone(), 0);
    history.push(cur.clone());
    for round in 1..=opts.max_rounds {
        cur = step_raw(g, &cur);
        if let Some(&t0) = seen.get(&cur) {
            let configs = history[t0..round].to_vec();
            return Ok(CycleSummary::from_parts(g, t0, configs));
        }
        seen.insert(cur.clone(), round);
        history.push(cur.clone());
    }
    Err(EngineError::BudgetExceeded {
        rounds: opts.max_rounds,
    })
}

fn find_cycle_brent(
    g: &Graph,
    sigma: &ChipConfig,
    max_rounds: usize,
) -> Result<CycleSummary, EngineError> {
    // Brent's algorithm: the teleporting tortoise waits at positions
    // 2^k - 1 while the hare walks; the first match gives the minimal
    // period directly.
    let start = sigma.chips().to_vec();
    let mut power = 1usize;
    let mut lam = 1usize;
    let mut tortoise = start.clone();
    let mut hare = step_raw(g, &start);
    let mut hare_pos = 1usize;
    while tortoise != hare {
        if hare_pos > max_rounds.saturating_mul(3).max(16) {
            return Err(EngineError::BudgetExceeded { rounds: max_rounds });
        }
        if power == lam {
            tortoise = hare.clone();
            power *= 2;
            lam = 0;
        }
        hare = step_raw(g, &hare);
        hare_pos += 1;
        lam += 1;
    }
    // Two pointers lam apart locate the cycle entry.
    let mut ahead = start.clone();
    for _ in 0..lam {
        ahead = step_raw(g, &ahead);
    }
    let mut behind = start;
    let mut t0 = 0usize;
    while behind != ahead {
        behind = step_raw(g, &behind);
        ahead = step_raw(g, &ahead);
        t0 += 1;
    }
    if t0 + lam > max_rounds {
        return Err(EngineError::BudgetExceeded { rounds: max_rounds });
    }
    let mut configs = Vec::with_capacity(lam);
    let mut cur = behind;
    for _ in 0..lam {
        let next = step_raw(g, &cur);
        configs.push(cur);
        cur = next;
    }
    Ok(CycleSummary::from_parts(g, t0, configs))
}
