//! Configuration-space enumeration and sampling, the per-game invariant
//! battery, theorem verification drivers, staircase data, and deterministic
//! parallel execution.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    abundant_vertices, activity, complement, firing_sequence, format_ratio as ratio_str, is_clumpy,
    is_compliant,
};
use crate::assignment::check_assignment_lemmas;
use crate::engine::{find_cycle, ChipConfig, CycleSummary, EngineError};
use crate::graph::{enumerate_connected, random_connected, Graph};
use crate::report::{FailureRecord, VerificationReport};

/// Capped configuration space: every `sigma` with `sum = total` and
/// `sigma(v) <= caps(v)`.
///
/// The default cap `2 deg(v) - 1` makes period-focused sweeps exhaustive:
/// abundant vertices do not exist on non-stabilizing cycles, and the total
/// is conserved, so every eventual cycle lies inside the capped box.
#[derive(Clone, Debug)]
pub struct ConfigSpace {
    pub caps: Vec<u64>,
    pub total: u64,
}

impl ConfigSpace {
    /// Per-vertex cap `2 deg(v) - 1`.
    pub fn capped(g: &Graph, total: u64) -> Self {
        ConfigSpace {
            caps: (0..g.n())
                .map(|v| (2 * g.degree(v) as u64).saturating_sub(1))
                .collect(),
            total,
        }
    }

    /// No effective cap: each vertex may hold up to the whole total.
    pub fn unrestricted(n: usize, total: u64) -> Self {
        ConfigSpace {
            caps: vec![total; n],
            total,
        }
    }

    pub fn cap_sum(&self) -> u64 {
        self.caps.iter().sum()
    }

    pub fn infeasible(&self) -> bool {
        self.total > self.cap_sum()
    }
}

/// Lexicographic stream of every capped composition of the total. An
/// infeasible space yields nothing and sets [`CappedCompositions::infeasible`].
pub struct CappedCompositions {
    caps: Vec<u64>,
    suffix_caps: Vec<u64>,
    state: Option<Vec<u64>>,
    pub infeasible: bool,
}

pub fn enumerate_configs(space: &ConfigSpace) -> CappedCompositions {
    let n = space.caps.len();
    let mut suffix_caps = vec![0u64; n + 1];
    for i in (0..n).rev() {
        suffix_caps[i] = suffix_caps[i + 1] + space.caps[i];
    }
    let infeasible = space.infeasible();
    let state = if infeasible {
        None
    } else {
        // lexicographically smallest: push as much as possible to the tail
        let mut first = vec![0u64; n];
        let mut rem = space.total;
        for i in 0..n {
            let v = rem.saturating_sub(suffix_caps[i + 1]);
            first[i] = v;
            rem -= v;
        }
        Some(first)
    };
    CappedCompositions {
        caps: space.caps.clone(),
        suffix_caps,
        state,
        infeasible,
    }
}

impl Iterator for CappedCompositions {
    type Item = ChipConfig;

    fn next(&mut self) -> Option<ChipConfig> {
        let cur = self.state.take()?;
        let out = ChipConfig::new(cur.clone());
        let n = cur.len();
        let mut next = cur;
        let mut suffix = 0u64;
        let mut bumped = false;
        for i in (0..n.saturating_sub(1)).rev() {
            suffix += next[i + 1];
            if suffix >= 1 && next[i] < self.caps[i] {
                next[i] += 1;
                let mut rem = suffix - 1;
                for j in i + 1..n {
                    let v = rem.saturating_sub(self.suffix_caps[j + 1]);
                    next[j] = v;
                    rem -= v;
                }
                bumped = true;
                break;
            }
        }
        if bumped {
            self.state = Some(next);
        }
        Some(out)
    }
}

/// Uniform sample among capped compositions, by rejection from uncapped
/// stars-and-bars. When the total exceeds half the cap sum the complementary
/// space is sampled instead and flipped, which keeps the acceptance rate
/// workable near the top of the box. Returns `None` only for infeasible
/// spaces or rejection-budget exhaustion.
pub fn sample_config(rng: &mut ChaCha8Rng, caps: &[u64], total: u64) -> Option<ChipConfig> {
    let cap_sum: u64 = caps.iter().sum();
    if total > cap_sum {
        return None;
    }
    let (target, flip) = if total > cap_sum / 2 {
        (cap_sum - total, true)
    } else {
        (total, false)
    };
    let n = caps.len();
    for _ in 0..100_000 {
        let parts = uniform_composition(rng, target, n);
        if parts.iter().zip(caps).all(|(&p, &c)| p <= c) {
            let out: Vec<u64> = if flip {
                parts.iter().zip(caps).map(|(&p, &c)| c - p).collect()
            } else {
                parts
            };
            return Some(ChipConfig::new(out));
        }
    }
    None
}

fn uniform_composition(rng: &mut ChaCha8Rng, total: u64, n: usize) -> Vec<u64> {
    if n == 1 {
        return vec![total];
    }
    let slots = (total as usize) + n - 1;
    let mut bars: Vec<usize> = rand::seq::index::sample(rng, slots, n - 1).into_vec();
    bars.sort_unstable();
    let mut parts = Vec::with_capacity(n);
    parts.push(bars[0] as u64);
    for k in 1..n - 1 {
        parts.push((bars[k] - bars[k - 1] - 1) as u64);
    }
    parts.push((slots - 1 - bars[n - 2]) as u64);
    parts
}

/// Worker count resolution: explicit flag, then the CHIPFIRE_THREADS
/// environment variable, then the machine's parallelism.
pub fn resolve_workers(flag: Option<usize>) -> usize {
    if let Some(w) = flag {
        if w >= 1 {
            return w;
        }
    }
    if let Ok(s) = std::env::var("CHIPFIRE_THREADS") {
        if let Ok(w) = s.parse::<usize>() {
            if w >= 1 {
                return w;
            }
        }
    }
    std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
}

/// Runs independent jobs across `workers` threads. Results come back in
/// task order, so merged reports are identical at any worker count. A
/// panicking task becomes an `Err` entry, never a silent loss.
pub fn run_parallel<T, R, F>(tasks: &[T], workers: usize, f: F) -> Vec<Result<R, String>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let run_one = |t: &T| -> Result<R, String> {
        catch_unwind(AssertUnwindSafe(|| f(t))).map_err(|p| panic_message(p.as_ref()))
    };
    if tasks.is_empty() {
        return Vec::new();
    }
    if workers <= 1 {
        return tasks.iter().map(run_one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("worker pool");
    pool.install(|| {
        use rayon::prelude::*;
        tasks.par_iter().map(run_one).collect()
    })
}

fn panic_message(p: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        format!("worker panic: {}", s)
    } else if let Some(s) = p.downcast_ref::<String>() {
        format!("worker panic: {}", s)
    } else {
        "worker panic".to_string()
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    /// Per-game cycle-detection budget.
    pub max_rounds: usize,
    /// Resolved worker count.
    pub workers: usize,
    /// Run the invariant battery on every simulated game.
    pub check_battery: bool,
    /// Inclusive override of the chip-total range for range claims.
    pub totals_override: Option<(u64, u64)>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            max_rounds: 1_000_000,
            workers: resolve_workers(None),
            check_battery: true,
            totals_override: None,
        }
    }
}

/// Invariant battery applied to every simulated game: chip conservation,
/// equal per-vertex firing counts over the cycle, no clumpy firing
/// sequence, stable games firing all-or-none within the chip bounds, no
/// abundant vertex on a non-stabilizing cycle, and complement duality
/// (equal period, negated firing matrix) where the complement is defined.
pub fn lemma_battery(g: &Graph, s: &CycleSummary, max_rounds: usize) -> Vec<String> {
    let mut out = Vec::new();
    let total = s.total();
    for (t, c) in s.cycle_configs().iter().enumerate() {
        if c.total() != total {
            out.push(format!("conservation violated on cycle round {}", t));
        }
    }
    let counts: Vec<u64> = (0..g.n()).map(|v| s.firings_of(v)).collect();
    if counts.windows(2).any(|w| w[0] != w[1]) {
        out.push(format!(
            "per-vertex firing counts differ over the cycle: {:?}",
            counts
        ));
    }
    for v in 0..g.n() {
        let w = firing_sequence(s, v).expect("vertex in range");
        if is_clumpy(&w) {
            out.push(format!("clumpy firing sequence {} at vertex {}", w, v));
        }
    }
    if s.period() == 1 {
        let fired = s.firing_row(0).iter().filter(|&&b| b).count();
        if fired != 0 && fired != g.n() {
            out.push(format!("stable game fires {} of {} vertices", fired, g.n()));
        } else if fired == 0 && total > (2 * g.m() - g.n()) as u64 {
            out.push(format!("all-wait game with {} > 2|E|-|V| chips", total));
        } else if fired == g.n() && total < 2 * g.m() as u64 {
            out.push(format!("all-fire game with {} < 2|E| chips", total));
        }
    } else {
        for (t, c) in s.cycle_configs().iter().enumerate() {
            let ab = abundant_vertices(g, c);
            if !ab.is_empty() {
                out.push(format!(
                    "abundant vertices {:?} on cycle round {} of a non-stabilizing game",
                    ab, t
                ));
            }
        }
        match complement(g, &s.cycle_configs()[0]) {
            Err(e) => out.push(format!(
                "complement undefined on a non-stabilizing cycle: {}",
                e
            )),
            Ok(comp) => match find_cycle(g, &comp, max_rounds) {
                Err(e) => out.push(format!("complement game did not resolve: {}", e)),
                Ok(cs) => {
                    if cs.t0() != 0 {
                        out.push(format!("complement of a cycle config has t0 = {}", cs.t0()));
                    }
                    if cs.period() != s.period() {
                        out.push(format!(
                            "complement period {} != original period {}",
                            cs.period(),
                            s.period()
                        ));
                    } else {
                        'scan: for t in 0..s.period() {
                            for v in 0..g.n() {
                                if cs.fires_at(t, v) == s.fires_at(t, v) {
                                    out.push(format!(
                                        "complement firing not negated at round {}, vertex {}",
                                        t, v
                                    ));
                                    break 'scan;
                                }
                            }
                        }
                    }
                }
            },
        }
    }
    out
}

/// Accumulator for one worker task.
#[derive(Default, Clone, Debug)]
pub struct SweepTally {
    pub checked: u64,
    pub failures: Vec<FailureRecord>,
    pub budget_exceeded: u64,
}

pub fn record(
    g: &Graph,
    sigma: &ChipConfig,
    t0: usize,
    period: usize,
    detail: String,
) -> FailureRecord {
    FailureRecord {
        graph: g.to_file_format(),
        sigma: sigma.to_string(),
        t0,
        period,
        detail,
    }
}

/// Simulates one game, applies the claim expectation and (optionally) the
/// battery, and folds the outcome into the tally.
pub fn check_game<F>(
    g: &Graph,
    sigma: &ChipConfig,
    opts: &SweepOptions,
    expect: F,
    tally: &mut SweepTally,
) where
    F: Fn(&CycleSummary) -> Vec<String>,
{
    match find_cycle(g, sigma, opts.max_rounds) {
        Err(EngineError::BudgetExceeded { .. }) => tally.budget_exceeded += 1,
        Err(e) => tally
            .failures
            .push(record(g, sigma, 0, 0, format!("engine error: {}", e))),
        Ok(s) => {
            tally.checked += 1;
            let mut details = expect(&s);
            if opts.check_battery {
                details.extend(lemma_battery(g, &s, opts.max_rounds));
            }
            for d in details {
                tally.failures.push(record(g, sigma, s.t0(), s.period(), d));
            }
        }
    }
}

fn merge(results: Vec<Result<SweepTally, String>>) -> (SweepTally, bool) {
    let mut total = SweepTally::default();
    let mut panicked = false;
    for r in results {
        match r {
            Ok(t) => {
                total.checked += t.checked;
                total.failures.extend(t.failures);
                total.budget_exceeded += t.budget_exceeded;
            }
            Err(msg) => {
                panicked = true;
                total.failures.push(FailureRecord {
                    graph: String::new(),
                    sigma: String::new(),
                    t0: 0,
                    period: 0,
                    detail: msg,
                });
            }
        }
    }
    (total, panicked)
}

/// The non-stabilizing middle range `2|E| - |V| < |sigma| < 2|E|`,
/// inclusive bounds on the totals actually enumerated. Empty (lo > hi) for
/// a single-vertex graph.
pub fn middle_range(g: &Graph) -> (u64, u64) {
    let m = g.m() as u64;
    let n = g.n() as u64;
    if 2 * m < n {
        return (1, 0);
    }
    (2 * m - n + 1, 2 * m - 1)
}

/// Default graph stream for theorem sweeps: one representative per
/// isomorphism class of connected graphs on 2..=n_max vertices.
pub fn default_graph_stream(n_max: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        out.extend(enumerate_connected(n, true).expect("within enumeration limit"));
    }
    out
}

fn range_sweep<F>(
    claim: &str,
    graphs: &[Graph],
    opts: &SweepOptions,
    range_of: impl Fn(&Graph) -> (u64, u64) + Sync,
    expect: F,
    extra_params: serde_json::Value,
) -> VerificationReport
where
    F: Fn(&Graph, &CycleSummary) -> Vec<String> + Sync,
{
    let results = run_parallel(graphs, opts.workers, |g| {
        let mut tally = SweepTally::default();
        let (lo, hi) = opts.totals_override.unwrap_or_else(|| range_of(g));
        for total in lo..=hi {
            for sigma in enumerate_configs(&ConfigSpace::capped(g, total)) {
                check_game(g, &sigma, opts, |s| expect(g, s), &mut tally);
            }
        }
        tally
    });
    let (tally, panicked) = merge(results);
    let mut params = serde_json::json!({
        "graphs": graphs.len(),
        "caps": "2*deg(v)-1",
        "max_rounds": opts.max_rounds,
        "battery": opts.check_battery,
    });
    if let Some((lo, hi)) = opts.totals_override {
        params["totals"] = serde_json::json!([lo, hi]);
    }
    merge_params(&mut params, extra_params);
    let incomplete = tally.budget_exceeded > 0 || panicked;
    let mut report =
        VerificationReport::new(claim, params, tally.checked, tally.failures, incomplete);
    if tally.budget_exceeded > 0 {
        report.parameters["budget_exceeded_games"] = serde_json::json!(tally.budget_exceeded);
    }
    report
}

fn merge_params(base: &mut serde_json::Value, extra: serde_json::Value) {
    if let (Some(b), Some(e)) = (base.as_object_mut(), extra.as_object()) {
        for (k, v) in e {
            b.insert(k.clone(), v.clone());
        }
    }
}

/// Every in-range game has eventual period different from 3 and 4.
pub fn verify_theorem1(graphs: &[Graph], opts: &SweepOptions) -> VerificationReport {
    range_sweep(
        "theorem1",
        graphs,
        opts,
        middle_range,
        |_, s| {
            if s.period() == 3 || s.period() == 4 {
                vec![format!(
                    "period {} inside the range 2|E|-|V| < |sigma| < 2|E|",
                    s.period()
                )]
            } else {
                Vec::new()
            }
        },
        serde_json::json!({"range": "2|E|-|V| < |sigma| < 2|E|"}),
    )
}

/// Parameters of the randomized phase of the period-2 conjecture sweep.
#[derive(Clone, Debug)]
pub struct RandomPhase {
    pub samples: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub seed: u64,
}

/// Every in-range game has eventual period exactly 2: exhaustively over the
/// given graphs, plus an optional randomized phase over random connected
/// graphs.
pub fn verify_conjecture1(
    graphs: &[Graph],
    random: Option<&RandomPhase>,
    opts: &SweepOptions,
) -> VerificationReport {
    let expect_t2 = |s: &CycleSummary| {
        if s.period() != 2 {
            vec![format!("period {} != 2 inside the range", s.period())]
        } else {
            Vec::new()
        }
    };
    let mut report = range_sweep(
        "conjecture1",
        graphs,
        opts,
        middle_range,
        |_, s| expect_t2(s),
        serde_json::json!({"range": "2|E|-|V| < |sigma| < 2|E|"}),
    );
    if let Some(phase) = random {
        let tasks: Vec<u64> = (0..phase.samples).collect();
        let results = run_parallel(&tasks, opts.workers, |&i| {
            let mut tally = SweepTally::default();
            let mut rng = ChaCha8Rng::seed_from_u64(phase.seed);
            rng.set_stream(i + 1);
            let n = rng.gen_range(phase.n_min..=phase.n_max);
            let m = rng.gen_range(n - 1..=n * (n - 1) / 2);
            let g = random_connected(n, m, rng.gen()).expect("parameters in range");
            let (lo, hi) = middle_range(&g);
            let total = rng.gen_range(lo..=hi);
            let caps: Vec<u64> = (0..g.n()).map(|v| 2 * g.degree(v) as u64 - 1).collect();
            let sigma = sample_config(&mut rng, &caps, total).expect("feasible space");
            check_game(&g, &sigma, opts, expect_t2, &mut tally);
            tally
        });
        let (tally, panicked) = merge(results);
        report.games_checked += tally.checked;
        report.failures.extend(tally.failures);
        report.pass = report.failures.is_empty();
        report.incomplete = report.incomplete || tally.budget_exceeded > 0 || panicked;
        report.parameters["random_phase"] = serde_json::json!({
            "samples": phase.samples,
            "n": [phase.n_min, phase.n_max],
            "seed": phase.seed,
        });
    }
    report
}

/// Low range `|sigma| < |E|` exhaustively and high range
/// `|sigma| > 3|E| - |V|` by sampling: all games stabilize, with activity 0
/// and 1 respectively. The high range is unbounded, so it is sampled with
/// caps `3 deg(v)` and labeled as such.
pub fn verify_stabilization(
    graphs: &[Graph],
    high_samples: u64,
    seed: u64,
    opts: &SweepOptions,
) -> VerificationReport {
    let results = run_parallel(graphs, opts.workers, |g| {
        let mut tally = SweepTally::default();
        let expect_stable = |s: &CycleSummary, want_active: bool| -> Vec<String> {
            let mut v = Vec::new();
            if s.period() != 1 {
                v.push(format!("period {} != 1", s.period()));
                return v;
            }
            let act = activity(s);
            let want = if want_active {
                Ratio::from_integer(1)
            } else {
                Ratio::from_integer(0)
            };
            if act != want {
                v.push(format!("stable game with activity {} != {}", act, want));
            }
            v
        };
        // low range, exhaustive and uncapped
        for total in 0..g.m() as u64 {
            for sigma in enumerate_configs(&ConfigSpace::unrestricted(g.n(), total)) {
                check_game(g, &sigma, opts, |s| expect_stable(s, false), &mut tally);
            }
        }
        // high range, sampled with caps 3*deg(v)
        let caps: Vec<u64> = (0..g.n()).map(|v| 3 * g.degree(v) as u64).collect();
        let lo = (3 * g.m()).saturating_sub(g.n()) as u64 + 1;
        let hi: u64 = caps.iter().sum();
        if lo <= hi {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(g.fingerprint());
            for _ in 0..high_samples {
                let total = rng.gen_range(lo..=hi);
                let sigma = sample_config(&mut rng, &caps, total).expect("feasible space");
                check_game(g, &sigma, opts, |s| expect_stable(s, true), &mut tally);
            }
        }
        tally
    });
    let (tally, panicked) = merge(results);
    let incomplete = tally.budget_exceeded > 0 || panicked;
    VerificationReport::new(
        "stabilization_bounds",
        serde_json::json!({
            "graphs": graphs.len(),
            "low_range": "exhaustive |sigma| < |E|, uncapped",
            "high_range": "sampled |sigma| > 3|E|-|V|, caps 3*deg(v)",
            "high_samples": high_samples,
            "seed": seed,
            "max_rounds": opts.max_rounds,
        }),
        tally.checked,
        tally.failures,
        incomplete,
    )
}

/// Runs the invariant battery over every capped configuration of every
/// graph (all totals), and the full assignment certification on every
/// compliant game encountered.
pub fn verify_lemma_battery(graphs: &[Graph], opts: &SweepOptions) -> VerificationReport {
    let results = run_parallel(graphs, opts.workers, |g| {
        let mut tally = SweepTally::default();
        let mut compliant = 0u64;
        let mut wrap_skipped = 0u64;
        let cap_sum: u64 = (0..g.n())
            .map(|v| (2 * g.degree(v) as u64).saturating_sub(1))
            .sum();
        for total in 0..=cap_sum {
            for sigma in enumerate_configs(&ConfigSpace::capped(g, total)) {
                match find_cycle(g, &sigma, opts.max_rounds) {
                    Err(EngineError::BudgetExceeded { .. }) => tally.budget_exceeded += 1,
                    Err(e) => {
                        tally
                            .failures
                            .push(record(g, &sigma, 0, 0, format!("engine error: {}", e)))
                    }
                    Ok(s) => {
                        tally.checked += 1;
                        for d in lemma_battery(g, &s, opts.max_rounds) {
                            tally
                                .failures
                                .push(record(g, &sigma, s.t0(), s.period(), d));
                        }
                        if is_compliant(&s, g) {
                            compliant += 1;
                            match check_assignment_lemmas(g, &s) {
                                Ok(out) => {
                                    wrap_skipped += out.wrap_checks_skipped as u64;
                                    for d in out.violations {
                                        tally.failures.push(record(
                                            g,
                                            &sigma,
                                            s.t0(),
                                            s.period(),
                                            format!("assignment: {}", d),
                                        ));
                                    }
                                }
                                Err(e) => tally.failures.push(record(
                                    g,
                                    &sigma,
                                    s.t0(),
                                    s.period(),
                                    format!("assignment: {}", e),
                                )),
                            }
                        }
                    }
                }
            }
        }
        (tally, compliant, wrap_skipped)
    });
    let mut games = 0u64;
    let mut compliant = 0u64;
    let mut wrap_skipped = 0u64;
    let mut failures = Vec::new();
    let mut budget = 0u64;
    let mut panicked = false;
    for r in results {
        match r {
            Ok((t, c, w)) => {
                games += t.checked;
                compliant += c;
                wrap_skipped += w;
                failures.extend(t.failures);
                budget += t.budget_exceeded;
            }
            Err(msg) => {
                panicked = true;
                failures.push(FailureRecord {
                    graph: String::new(),
                    sigma: String::new(),
                    t0: 0,
                    period: 0,
                    detail: msg,
                });
            }
        }
    }
    VerificationReport::new(
        "lemma_battery",
        serde_json::json!({
            "graphs": graphs.len(),
            "caps": "2*deg(v)-1",
            "totals": "0 ..= cap sum",
            "compliant_games": compliant,
            "deprived_checks": "each vertex at the round before its first firing; the wrapped round for vertices first firing on round 0 is asserted only in single-firing games",
            "wrap_checks_skipped": wrap_skipped,
            "max_rounds": opts.max_rounds,
            "budget_exceeded_games": budget,
        }),
        games,
        failures,
        budget > 0 || panicked,
    )
}

/// One staircase row: sampled activity statistics for a fixed chip total.
#[derive(Clone, Debug)]
pub struct StaircaseRow {
    pub total: u64,
    pub mean_chips: Ratio<u64>,
    pub activity_min: Option<Ratio<u64>>,
    pub activity_max: Option<Ratio<u64>>,
    pub activity_mean: Option<BigRational>,
    pub periods: BTreeMap<usize, u64>,
    pub budget_exceeded: u64,
}

#[derive(Clone, Debug)]
pub struct StaircaseTable {
    pub rows: Vec<StaircaseRow>,
    pub battery_failures: Vec<FailureRecord>,
}

/// Draws `samples_per_total` uncapped configurations for every total in
/// `0 ..= 4|E|`, resolves each game, and tabulates exact activity
/// statistics and a period histogram per total.
pub fn staircase(
    g: &Graph,
    samples_per_total: u64,
    seed: u64,
    transient_cap: usize,
    opts: &SweepOptions,
) -> StaircaseTable {
    let totals: Vec<u64> = (0..=4 * g.m() as u64).collect();
    let results = run_parallel(&totals, opts.workers, |&total| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(total + 1);
        let caps = vec![total; g.n()];
        let mut acts: Vec<Ratio<u64>> = Vec::new();
        let mut periods: BTreeMap<usize, u64> = BTreeMap::new();
        let mut budget = 0u64;
        let mut failures = Vec::new();
        for _ in 0..samples_per_total {
            let sigma = sample_config(&mut rng, &caps, total).expect("uncapped is feasible");
            match find_cycle(g, &sigma, transient_cap) {
                Err(EngineError::BudgetExceeded { .. }) => budget += 1,
                Err(e) => failures.push(record(g, &sigma, 0, 0, format!("engine error: {}", e))),
                Ok(s) => {
                    acts.push(activity(&s));
                    *periods.entry(s.period()).or_insert(0) += 1;
                    if opts.check_battery {
                        for d in lemma_battery(g, &s, opts.max_rounds) {
                            failures.push(record(g, &sigma, s.t0(), s.period(), d));
                        }
                    }
                }
            }
        }
        let row = StaircaseRow {
            total,
            mean_chips: Ratio::new(total, g.n() as u64),
            activity_min: acts.iter().min().copied(),
            activity_max: acts.iter().max().copied(),
            activity_mean: if acts.is_empty() {
                None
            } else {
                let sum: BigRational = acts
                    .iter()
                    .map(|r| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
                    .fold(BigRational::zero(), |a, b| a + b);
                Some(sum / BigRational::new(BigInt::from(acts.len() as u64), BigInt::from(1u64)))
            },
            periods,
            budget_exceeded: budget,
        };
        (row, failures)
    });
    let mut rows = Vec::new();
    let mut battery_failures = Vec::new();
    for r in results {
        match r {
            Ok((row, fails)) => {
                rows.push(row);
                battery_failures.extend(fails);
            }
            Err(msg) => battery_failures.push(FailureRecord {
                graph: String::new(),
                sigma: String::new(),
                t0: 0,
                period: 0,
                detail: msg,
            }),
        }
    }
    StaircaseTable {
        rows,
        battery_failures,
    }
}

fn big_ratio_str(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1u64) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Staircase CSV, one row per total:
/// `total,mean_chips,activity_min,activity_max,activity_mean,periods`.
/// Activities are exact fractions; `periods` is a `T:count` histogram joined
/// with `;`, with an `x:count` entry for budget-exceeded samples.
pub fn staircase_csv(table: &StaircaseTable) -> String {
    let mut out =
        String::from("total,mean_chips,activity_min,activity_max,activity_mean,periods\n");
    for row in &table.rows {
        let mut hist: Vec<String> = row
            .periods
            .iter()
            .map(|(t, c)| format!("{}:{}", t, c))
            .collect();
        if row.budget_exceeded > 0 {
            hist.push(format!("x:{}", row.budget_exceeded));
        }
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.total,
            ratio_str(&row.mean_chips),
            row.activity_min.as_ref().map(ratio_str).unwrap_or_default(),
            row.activity_max.as_ref().map(ratio_str).unwrap_or_default(),
            row.activity_mean
                .as_ref()
                .map(big_ratio_str)
                .unwrap_or_default(),
            hist.join(";"),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, parse_graph, Family};

    fn triangle() -> Graph {
        parse_graph("3 3\n0 1\n1 2\n0 2").unwrap()
    }

    /// Inclusion-exclusion closed form for capped composition counts, the
    /// oracle the enumerator is checked against.
    fn capped_count(total: u64, caps: &[u64]) -> u128 {
        fn choose(n: u128, k: u128) -> u128 {
            if k > n {
                return 0;
            }
            let mut r = 1u128;
            for i in 0..k {
                r = r * (n - i) / (i + 1);
            }
            r
        }
        let n = caps.len();
        let mut count = 0i128;
        for mask in 0..(1u32 << n) {
            let mut subtract = 0u64;
            let bits = mask.count_ones();
            for (i, &c) in caps.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    subtract += c + 1;
                }
            }
            if subtract > total {
                continue;
            }
            let ways = choose((total - subtract) as u128 + n as u128 - 1, n as u128 - 1) as i128;
            count += if bits % 2 == 0 { ways } else { -ways };
        }
        count as u128
    }

    #[test]
    fn enumerate_matches_inclusion_exclusion() {
        let cases: Vec<(u64, Vec<u64>)> = vec![
            (4, vec![3, 3, 3]),
            (0, vec![3, 3, 3]),
            (9, vec![3, 3, 3]),
            (7, vec![1, 5, 2, 3]),
            (11, vec![2, 2, 2, 2, 2, 2]),
            (5, vec![5]),
        ];
        for (total, caps) in cases {
            let space = ConfigSpace {
                caps: caps.clone(),
                total,
            };
            let got = enumerate_configs(&space).count() as u128;
            assert_eq!(
                got,
                capped_count(total, &caps),
                "total {} caps {:?}",
                total,
                caps
            );
        }
    }

    #[test]
    fn enumerate_examples() {
        // triangle, total 4, caps (3,3,3): 15 compositions minus 3 overfull
        let space = ConfigSpace::capped(&triangle(), 4);
        let all: Vec<ChipConfig> = enumerate_configs(&space).collect();
        assert_eq!(all.len(), 12);
        assert_eq!(all[0].to_string(), "0,1,3");
        assert_eq!(all.last().unwrap().to_string(), "3,1,0");
        for c in &all {
            assert_eq!(c.total(), 4);
            assert!(c.chips().iter().all(|&x| x <= 3));
        }
        // lexicographic and duplicate-free
        let mut sorted = all.clone();
        sorted.sort_by(|a, b| a.chips().cmp(b.chips()));
        sorted.dedup();
        assert_eq!(sorted, all);

        // total 0
        let zero = enumerate_configs(&ConfigSpace::capped(&triangle(), 0));
        assert_eq!(zero.count(), 1);

        // infeasible: cap sum 9 < 10
        let mut inf = enumerate_configs(&ConfigSpace::capped(&triangle(), 10));
        assert!(inf.infeasible);
        assert!(inf.next().is_none());
    }

    #[test]
    fn sampling_is_uniform_enough_and_deterministic() {
        let caps = vec![3u64, 3, 3];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for _ in 0..2400 {
            let c = sample_config(&mut rng, &caps, 4).unwrap();
            assert_eq!(c.total(), 4);
            assert!(c.chips().iter().all(|&x| x <= 3));
            *counts.entry(c.to_string()).or_insert(0) += 1;
        }
        // all 12 configs appear, roughly uniformly
        assert_eq!(counts.len(), 12);
        assert!(counts.values().all(|&c| c > 100));

        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            assert_eq!(
                sample_config(&mut r1, &caps, 5),
                sample_config(&mut r2, &caps, 5)
            );
        }
        // complementary sampling near the top of the box
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = sample_config(&mut rng, &caps, 9).unwrap();
        assert_eq!(c.to_string(), "3,3,3");
        assert!(sample_config(&mut rng, &caps, 10).is_none());
    }

    #[test]
    fn worker_resolution_order() {
        assert_eq!(resolve_workers(Some(3)), 3);
        std::env::set_var("CHIPFIRE_THREADS", "2");
        assert_eq!(resolve_workers(None), 2);
        assert_eq!(resolve_workers(Some(5)), 5);
        std::env::remove_var("CHIPFIRE_THREADS");
        assert!(resolve_workers(None) >= 1);
    }

    #[test]
    fn run_parallel_contract() {
        let tasks: Vec<u64> = (0..100).collect();
        let seq = run_parallel(&tasks, 1, |&x| x * x);
        let par = run_parallel(&tasks, 8, |&x| x * x);
        assert_eq!(seq, par);
        assert!(run_parallel::<u64, u64, _>(&[], 4, |&x| x).is_empty());

        let hook = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let mixed = run_parallel(&tasks[..4], 2, |&x| {
            if x == 2 {
                panic!("boom {}", x)
            } else {
                x
            }
        });
        std::panic::set_hook(hook);
        assert_eq!(mixed[1], Ok(1));
        assert!(mixed[2].as_ref().unwrap_err().contains("boom"));
    }

    #[test]
    fn theorem1_and_conjecture1_on_triangle() {
        let graphs = vec![triangle()];
        let opts = SweepOptions {
            workers: 2,
            ..Default::default()
        };
        let r1 = verify_theorem1(&graphs, &opts);
        assert!(r1.pass, "{}", r1.to_json());
        assert!(r1.games_checked > 0);
        let r2 = verify_conjecture1(&graphs, None, &opts);
        assert!(r2.pass, "{}", r2.to_json());
    }

    #[test]
    fn conjecture1_fails_outside_its_range() {
        // totals override onto stabilizing territory: a real falsification path
        let graphs = vec![triangle()];
        let opts = SweepOptions {
            workers: 1,
            totals_override: Some((2, 2)),
            check_battery: false,
            ..Default::default()
        };
        let r = verify_conjecture1(&graphs, None, &opts);
        assert!(!r.pass);
        assert!(!r.failures.is_empty());
        assert!(r.failures[0].detail.contains("period"));
    }

    #[test]
    fn stabilization_on_small_graphs() {
        let graphs = default_graph_stream(4);
        let opts = SweepOptions {
            workers: 4,
            ..Default::default()
        };
        let r = verify_stabilization(&graphs, 20, 11, &opts);
        assert!(r.pass, "{}", r.to_json());
    }

    #[test]
    fn battery_clean_on_small_sweep() {
        let graphs = default_graph_stream(4);
        let opts = SweepOptions {
            workers: 4,
            ..Default::default()
        };
        let r = verify_lemma_battery(&graphs, &opts);
        assert!(r.pass, "{}", r.to_json());
        let compliant = r.parameters["compliant_games"].as_u64().unwrap();
        assert!(compliant > 0);
    }

    #[test]
    fn staircase_k2() {
        let k2 = parse_graph("2 1\n0 1").unwrap();
        let opts = SweepOptions {
            workers: 2,
            ..Default::default()
        };
        let table = staircase(&k2, 30, 5, 10_000, &opts);
        assert!(table.battery_failures.is_empty());
        let csv = staircase_csv(&table);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "total,mean_chips,activity_min,activity_max,activity_mean,periods"
        );
        // totals 0, 1, 2 give activities 0, 1/2, 1
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        assert!(rows[0].starts_with("0,0,0,0,0,"));
        assert!(rows[1].starts_with("1,1/2,1/2,1/2,1/2,"));
        assert!(rows[2].starts_with("2,1,1,1,1,"));
        assert_eq!(rows.len(), 4 * k2.m() + 1);
    }

    #[test]
    fn staircase_deterministic_across_workers() {
        let g = generate(&Family::Cycle(4)).unwrap();
        let one = SweepOptions {
            workers: 1,
            ..Default::default()
        };
        let eight = SweepOptions {
            workers: 8,
            ..Default::default()
        };
        let a = staircase_csv(&staircase(&g, 10, 99, 100_000, &one));
        let b = staircase_csv(&staircase(&g, 10, 99, 100_000, &eight));
        assert_eq!(a, b);
    }

    #[test]
    fn reports_deterministic_across_workers() {
        let graphs = default_graph_stream(4);
        let mk = |w: usize| {
            let opts = SweepOptions {
                workers: w,
                ..Default::default()
            };
            let phase = RandomPhase {
                samples: 40,
                n_min: 6,
                n_max: 8,
                seed: 3,
            };
            verify_conjecture1(&graphs, Some(&phase), &opts).to_json()
        };
        assert_eq!(mk(1), mk(8));
    }
}
