//! Conjugate configurations and related bookkeeping on complete bipartite
//! graphs `K_{a,a}`: side statistics, cumulative fire counts, the lemma
//! battery, and the period-2 range sweep.
//!
//! Side L is vertices `0..a` and side R is `a..2a`, matching the generator's
//! labeling. Within a side, vertices are ranked by chip count descending
//! (ties by ascending label), fixed once at the base configuration; the
//! `j`th conjugate shifts the top `j` ranks down by `a - j` and the rest up
//! by `j`, on both sides.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::analysis::{activity, Activity};
use crate::engine::{find_cycle, step, ChipConfig, EngineError};
use crate::graph::{generate, Family, Graph};
use crate::report::{FailureRecord, Theorem2Report};
use crate::sweep::{
    enumerate_configs, lemma_battery, record, run_parallel, sample_config, ConfigSpace,
    SweepOptions,
};

#[derive(Debug, Error)]
pub enum BipartiteError {
    #[error("graph is not complete bipartite K_{{a,a}} with sides 0..a and a..2a")]
    NotBalancedCompleteBipartite,
    #[error("conjugate index {j} out of range 1..={a}")]
    IndexOutOfRange { j: usize, a: usize },
    #[error("conjugate c^{j} undefined: rank {rank} on side {side} would go negative")]
    ConjugateUndefined { j: usize, side: char, rank: usize },
    #[error("need side size a >= 2, got {a}")]
    SideTooSmall { a: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Side size `a` when the graph is `K_{a,a}` with the declared labeling,
/// else `None`.
pub fn side_size(g: &Graph) -> Option<usize> {
    if g.n() % 2 != 0 {
        return None;
    }
    let a = g.n() / 2;
    if g.m() != a * a {
        return None;
    }
    for &(u, v) in g.edges() {
        if !(u < a && v >= a) {
            return None;
        }
    }
    Some(a)
}

/// Per-side ranking of a configuration by chip count descending.
#[derive(Clone, Debug)]
pub struct SortedSides {
    pub a: usize,
    /// Original labels of L_1..L_a (0-indexed storage).
    pub l_order: Vec<usize>,
    pub r_order: Vec<usize>,
    /// Chip counts in ranked order.
    pub sigma_l: Vec<u64>,
    pub sigma_r: Vec<u64>,
    pub total_l: u64,
    pub total_r: u64,
}

pub fn sorted_sides(g: &Graph, sigma: &ChipConfig) -> Result<SortedSides, BipartiteError> {
    let a = side_size(g).ok_or(BipartiteError::NotBalancedCompleteBipartite)?;
    crate::engine::check_config(g, sigma)?;
    let rank = |range: std::ops::Range<usize>| -> Vec<usize> {
        let mut order: Vec<usize> = range.collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(sigma[v]), v));
        order
    };
    let l_order = rank(0..a);
    let r_order = rank(a..2 * a);
    let sigma_l: Vec<u64> = l_order.iter().map(|&v| sigma[v]).collect();
    let sigma_r: Vec<u64> = r_order.iter().map(|&v| sigma[v]).collect();
    Ok(SortedSides {
        a,
        total_l: sigma_l.iter().sum(),
        total_r: sigma_r.iter().sum(),
        l_order,
        r_order,
        sigma_l,
        sigma_r,
    })
}

/// The `j`th conjugate of the base configuration, over original labels.
#[derive(Clone, Debug)]
pub struct ConjugateConfig {
    pub j: usize,
    pub config: ChipConfig,
}

/// True when every entry of `c^j sigma` stays nonnegative: the smallest of
/// the top `j` ranks on each side must be at least `a - j`.
pub fn conjugate_defined(ss: &SortedSides, j: usize) -> bool {
    j >= 1
        && j <= ss.a
        && ss.sigma_l[j - 1] + j as u64 >= ss.a as u64
        && ss.sigma_r[j - 1] + j as u64 >= ss.a as u64
}

pub fn conjugate(ss: &SortedSides, j: usize) -> Result<ConjugateConfig, BipartiteError> {
    let a = ss.a;
    if j < 1 || j > a {
        return Err(BipartiteError::IndexOutOfRange { j, a });
    }
    let mut out = vec![0u64; 2 * a];
    for (side, order, sorted) in [
        ('L', &ss.l_order, &ss.sigma_l),
        ('R', &ss.r_order, &ss.sigma_r),
    ] {
        for (idx, (&v, &chips)) in order.iter().zip(sorted.iter()).enumerate() {
            let rank = idx + 1;
            let shifted = if rank <= j {
                (chips + j as u64).checked_sub(a as u64)
            } else {
                Some(chips + j as u64)
            };
            match shifted {
                Some(x) => out[v] = x,
                None => {
                    return Err(BipartiteError::ConjugateUndefined { j, side, rank });
                }
            }
        }
    }
    Ok(ConjugateConfig {
        j,
        config: ChipConfig::new(out),
    })
}

/// Side statistics: minimum chips on a side, and how many of its vertices
/// fire (hold at least `a` chips).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SideStats {
    pub ell_l: u64,
    pub r_l: usize,
    pub ell_r: u64,
    pub r_r: usize,
}

pub fn side_stats(ss: &SortedSides) -> SideStats {
    let a = ss.a as u64;
    SideStats {
        ell_l: *ss.sigma_l.last().unwrap(),
        r_l: ss.sigma_l.iter().filter(|&&c| c >= a).count(),
        ell_r: *ss.sigma_r.last().unwrap(),
        r_r: ss.sigma_r.iter().filter(|&&c| c >= a).count(),
    }
}

/// Cumulative firing counts `u_t(sigma, v)` for `t = 0..=horizon`, side
/// sums, and, when paired with a conjugate run, the differences
/// `z_t^j(v) = u_t(c^j sigma, v) - u_t(sigma, v)`.
#[derive(Clone, Debug)]
pub struct FireCountTable {
    pub horizon: usize,
    /// `u[t][v]`: firings of `v` during the first `t` rounds.
    pub u: Vec<Vec<u64>>,
    pub alpha_l: Vec<u64>,
    pub alpha_r: Vec<u64>,
    pub paired: Option<PairedCounts>,
}

#[derive(Clone, Debug)]
pub struct PairedCounts {
    pub j: usize,
    pub u: Vec<Vec<u64>>,
    pub z: Vec<Vec<i64>>,
}

fn cumulative_counts(g: &Graph, sigma: &ChipConfig, horizon: usize) -> Vec<Vec<u64>> {
    let n = g.n();
    let mut rows = Vec::with_capacity(horizon + 1);
    rows.push(vec![0u64; n]);
    let mut cur = sigma.clone();
    for t in 1..=horizon {
        let mut row = rows[t - 1].clone();
        for v in 0..n {
            if cur[v] >= g.degree(v) as u64 {
                row[v] += 1;
            }
        }
        rows.push(row);
        cur = step(g, &cur);
    }
    rows
}

pub fn fire_counts(
    g: &Graph,
    sigma: &ChipConfig,
    horizon: usize,
    paired: Option<&ConjugateConfig>,
) -> Result<FireCountTable, BipartiteError> {
    let a = side_size(g).ok_or(BipartiteError::NotBalancedCompleteBipartite)?;
    crate::engine::check_config(g, sigma)?;
    if let Some(c) = paired {
        crate::engine::check_config(g, &c.config)?;
    }
    let u = cumulative_counts(g, sigma, horizon);
    let alpha_l: Vec<u64> = u.iter().map(|row| row[..a].iter().sum()).collect();
    let alpha_r: Vec<u64> = u.iter().map(|row| row[a..].iter().sum()).collect();
    let paired = paired.map(|cj| {
        let uc = cumulative_counts(g, &cj.config, horizon);
        let z: Vec<Vec<i64>> = uc
            .iter()
            .zip(u.iter())
            .map(|(rc, rb)| {
                rc.iter()
                    .zip(rb.iter())
                    .map(|(&c, &b)| c as i64 - b as i64)
                    .collect()
            })
            .collect();
        PairedCounts { j: cj.j, u: uc, z }
    });
    Ok(FireCountTable {
        horizon,
        u,
        alpha_l,
        alpha_r,
        paired,
    })
}

/// Outcome of the per-configuration lemma battery on `K_{a,a}`.
#[derive(Clone, Debug)]
pub struct BipartiteCheck {
    pub activity: Activity,
    pub undefined_conjugates: u64,
    pub violations: Vec<String>,
}

/// Checks, for one base configuration: confinement of each side's spread on
/// every cycle round when `0 < A < 1`; the z-bounds for every defined
/// conjugate and every round up to `horizon`; exact activity equality with
/// every defined conjugate; the `u_{2t} >= t` growth law per side whenever
/// `u_2 >= 1` across that side; and, for in-range totals, the sorted bound
/// `sigma(L_i) < 2a - i` on every cycle round (on each side of minimum
/// total, where its derivation applies).
pub fn check_bipartite_lemmas(
    g: &Graph,
    sigma: &ChipConfig,
    horizon: usize,
) -> Result<BipartiteCheck, BipartiteError> {
    let a = side_size(g).ok_or(BipartiteError::NotBalancedCompleteBipartite)?;
    let ss = sorted_sides(g, sigma)?;
    let s = find_cycle(g, sigma, 1_000_000)?;
    let act = activity(&s);
    let mut violations = Vec::new();

    let zero = Activity::from_integer(0);
    let one = Activity::from_integer(1);
    if act > zero && act < one {
        for (t, c) in s.cycle_configs().iter().enumerate() {
            for (side, range) in [('L', 0..a), ('R', a..2 * a)] {
                let vals = &c.chips()[range];
                let max = *vals.iter().max().unwrap();
                let min = *vals.iter().min().unwrap();
                if max - min >= a as u64 {
                    violations.push(format!(
                        "side {} spread {} >= a on cycle round {}",
                        side,
                        max - min,
                        t
                    ));
                }
            }
        }
    }

    let base = fire_counts(g, sigma, horizon, None)?;
    let mut undefined = 0u64;
    for j in 1..=a {
        if !conjugate_defined(&ss, j) {
            undefined += 1;
            continue;
        }
        let cj = conjugate(&ss, j)?;
        let tbl = fire_counts(g, sigma, horizon, Some(&cj))?;
        let paired = tbl.paired.as_ref().unwrap();
        for t in 1..=horizon {
            for (order, side) in [(&ss.l_order, 'L'), (&ss.r_order, 'R')] {
                for (idx, &v) in order.iter().enumerate() {
                    let rank = idx + 1;
                    let z = paired.z[t][v];
                    let ok = if rank <= j {
                        (-1..=0).contains(&z)
                    } else {
                        (0..=1).contains(&z)
                    };
                    if !ok {
                        violations.push(format!(
                            "z_{}^{}({}_{}) = {} out of bounds",
                            t, j, side, rank, z
                        ));
                    }
                }
            }
        }
        let cs = find_cycle(g, &cj.config, 1_000_000)?;
        let cact = activity(&cs);
        if cact != act {
            violations.push(format!(
                "activity {} of c^{} differs from base activity {}",
                cact, j, act
            ));
        }
    }

    if horizon >= 2 {
        for (order, side) in [(&ss.l_order, 'L'), (&ss.r_order, 'R')] {
            if order.iter().all(|&v| base.u[2][v] >= 1) {
                for t in 1..=horizon / 2 {
                    for &v in order.iter() {
                        if base.u[2 * t][v] < t as u64 {
                            violations.push(format!(
                                "u_{}(side {}, vertex {}) = {} < {}",
                                2 * t,
                                side,
                                v,
                                base.u[2 * t][v],
                                t
                            ));
                        }
                    }
                }
            }
        }
    }

    let total = sigma.total();
    let (lo, hi) = proof_range(a);
    if total > lo && total < hi {
        for (t, c) in s.cycle_configs().iter().enumerate() {
            let tl: u64 = c.chips()[..a].iter().sum();
            let tr: u64 = c.chips()[a..].iter().sum();
            for (side, range, this_total, other_total) in
                [('L', 0..a, tl, tr), ('R', a..2 * a, tr, tl)]
            {
                if this_total > other_total {
                    continue;
                }
                let mut vals: Vec<u64> = c.chips()[range].to_vec();
                vals.sort_unstable_by(|x, y| y.cmp(x));
                for (idx, &v) in vals.iter().enumerate() {
                    let bound = (2 * a - (idx + 1)) as u64;
                    if v >= bound {
                        violations.push(format!(
                            "cycle round {}: sorted side {} rank {} holds {} >= 2a - i = {}",
                            t,
                            side,
                            idx + 1,
                            v,
                            bound
                        ));
                    }
                }
            }
        }
    }

    Ok(BipartiteCheck {
        activity: act,
        undefined_conjugates: undefined,
        violations,
    })
}

/// The proof's open range `(2a^2 - 2a, 2a^2)` on the chip total.
pub fn proof_range(a: usize) -> (u64, u64) {
    let a = a as u64;
    (2 * a * a - 2 * a, 2 * a * a)
}

/// The statement's narrower open range `(2a^2 - a, 2a^2)`.
pub fn statement_range(a: usize) -> (u64, u64) {
    let a = a as u64;
    (2 * a * a - a, 2 * a * a)
}

#[derive(Clone, Debug)]
pub enum Theorem2Mode {
    /// Every configuration with per-vertex cap `2a - 1`, which covers every
    /// periodic orbit by abundance exclusion.
    Exhaustive,
    /// `count` random configurations; caps above the abundance bound allow
    /// transient starts.
    Sample { count: u64, seed: u64, cap: u64 },
}

/// Sweeps the proof range `2a^2 - 2a < |sigma| < 2a^2` on `K_{a,a}` and
/// asserts every game eventually has period exactly 2, tallying the
/// narrower statement range separately.
pub fn verify_theorem2(
    a: usize,
    mode: &Theorem2Mode,
    opts: &SweepOptions,
) -> Result<Theorem2Report, BipartiteError> {
    if a < 2 {
        return Err(BipartiteError::SideTooSmall { a });
    }
    let g = generate(&Family::CompleteBipartite(a, a)).expect("a >= 2");
    let (lo, hi) = proof_range(a);
    let (stmt_lo, _) = statement_range(a);
    let (total_lo, total_hi) = opts.totals_override.unwrap_or((lo + 1, hi - 1));

    struct Out {
        tally: crate::sweep::SweepTally,
        statement_games: u64,
        undefined: u64,
    }

    let per_game =
        |g: &Graph, sigma: &ChipConfig, out: &mut Out, opts: &SweepOptions| match find_cycle(
            g,
            sigma,
            opts.max_rounds,
        ) {
            Err(EngineError::BudgetExceeded { .. }) => out.tally.budget_exceeded += 1,
            Err(e) => {
                out.tally
                    .failures
                    .push(record(g, sigma, 0, 0, format!("engine error: {}", e)))
            }
            Ok(s) => {
                out.tally.checked += 1;
                if sigma.total() > stmt_lo {
                    out.statement_games += 1;
                }
                let ss = sorted_sides(g, sigma).expect("K_{a,a}");
                out.undefined += (1..=ss.a).filter(|&j| !conjugate_defined(&ss, j)).count() as u64;
                if s.period() != 2 {
                    out.tally.failures.push(record(
                        g,
                        sigma,
                        s.t0(),
                        s.period(),
                        format!("period {} != 2 inside the range", s.period()),
                    ));
                }
                if opts.check_battery {
                    for d in lemma_battery(g, &s, opts.max_rounds) {
                        out.tally
                            .failures
                            .push(record(g, sigma, s.t0(), s.period(), d));
                    }
                }
            }
        };

    let (mode_name, results) = match mode {
        Theorem2Mode::Exhaustive => {
            let totals: Vec<u64> = (total_lo..=total_hi).collect();
            let results = run_parallel(&totals, opts.workers, |&total| {
                let mut out = Out {
                    tally: Default::default(),
                    statement_games: 0,
                    undefined: 0,
                };
                for sigma in enumerate_configs(&ConfigSpace::capped(&g, total)) {
                    per_game(&g, &sigma, &mut out, opts);
                }
                out
            });
            ("exhaustive", results)
        }
        Theorem2Mode::Sample { count, seed, cap } => {
            let tasks: Vec<u64> = (0..*count).collect();
            let caps = vec![*cap; 2 * a];
            let results = run_parallel(&tasks, opts.workers, |&i| {
                let mut out = Out {
                    tally: Default::default(),
                    statement_games: 0,
                    undefined: 0,
                };
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(i + 1);
                let total = rng.gen_range(total_lo..=total_hi);
                match sample_config(&mut rng, &caps, total) {
                    Some(sigma) => per_game(&g, &sigma, &mut out, opts),
                    None => out.tally.failures.push(record(
                        &g,
                        &ChipConfig::new(vec![0; 2 * a]),
                        0,
                        0,
                        format!("sampling failed for total {}", total),
                    )),
                }
                out
            });
            ("sample", results)
        }
    };

    let mut games = 0u64;
    let mut statement_games = 0u64;
    let mut undefined = 0u64;
    let mut failures = Vec::new();
    let mut budget = 0u64;
    let mut panicked = false;
    for r in results {
        match r {
            Ok(out) => {
                games += out.tally.checked;
                statement_games += out.statement_games;
                undefined += out.undefined;
                failures.extend(out.tally.failures);
                budget += out.tally.budget_exceeded;
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
    let pass = failures.is_empty();
    Ok(Theorem2Report {
        claim: "theorem2".into(),
        a,
        range: [lo, hi],
        range_statement: [stmt_lo, hi],
        mode: mode_name.into(),
        games_checked: games,
        games_statement_range: statement_games,
        undefined_conjugates: undefined,
        failures,
        pass,
        incomplete: budget > 0 || panicked,
        elapsed_ms: None,
    })
}

/// Runs [`check_bipartite_lemmas`] (horizon `4T`) over every capped
/// configuration of `K_{a,a}`, all totals.
pub fn verify_bipartite_lemmas(
    a: usize,
    opts: &SweepOptions,
) -> Result<crate::report::VerificationReport, BipartiteError> {
    if a < 2 {
        return Err(BipartiteError::SideTooSmall { a });
    }
    let g = generate(&Family::CompleteBipartite(a, a)).expect("a >= 2");
    let cap_sum = (2 * a * (2 * a - 1)) as u64;
    let totals: Vec<u64> = (0..=cap_sum).collect();
    let results = run_parallel(&totals, opts.workers, |&total| {
        let mut tally = crate::sweep::SweepTally::default();
        let mut undefined = 0u64;
        for sigma in enumerate_configs(&ConfigSpace::capped(&g, total)) {
            match find_cycle(&g, &sigma, opts.max_rounds) {
                Err(EngineError::BudgetExceeded { .. }) => {
                    tally.budget_exceeded += 1;
                    continue;
                }
                Err(e) => {
                    tally
                        .failures
                        .push(record(&g, &sigma, 0, 0, format!("engine error: {}", e)));
                    continue;
                }
                Ok(s) => {
                    tally.checked += 1;
                    if opts.check_battery {
                        for d in lemma_battery(&g, &s, opts.max_rounds) {
                            tally
                                .failures
                                .push(record(&g, &sigma, s.t0(), s.period(), d));
                        }
                    }
                    let horizon = 4 * s.period();
                    match check_bipartite_lemmas(&g, &sigma, horizon) {
                        Ok(check) => {
                            undefined += check.undefined_conjugates;
                            for d in check.violations {
                                tally
                                    .failures
                                    .push(record(&g, &sigma, s.t0(), s.period(), d));
                            }
                        }
                        Err(e) => tally.failures.push(record(
                            &g,
                            &sigma,
                            s.t0(),
                            s.period(),
                            format!("lemma check: {}", e),
                        )),
                    }
                }
            }
        }
        (tally, undefined)
    });
    let mut games = 0u64;
    let mut undefined = 0u64;
    let mut failures = Vec::new();
    let mut budget = 0u64;
    let mut panicked = false;
    for r in results {
        match r {
            Ok((t, u)) => {
                games += t.checked;
                undefined += u;
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
    Ok(crate::report::VerificationReport::new(
        "bipartite_lemmas",
        serde_json::json!({
            "a": a,
            "caps": "2a-1",
            "totals": "0 ..= cap sum",
            "horizon": "4T",
            "undefined_conjugates": undefined,
            "max_rounds": opts.max_rounds,
        }),
        games,
        failures,
        budget > 0 || panicked,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use num_rational::Ratio;

    fn k22() -> Graph {
        generate(&Family::CompleteBipartite(2, 2)).unwrap()
    }

    fn cfg(s: &str) -> ChipConfig {
        s.parse().unwrap()
    }

    #[test]
    fn sorted_sides_examples() {
        let g = k22();
        let ss = sorted_sides(&g, &cfg("2,1,2,1")).unwrap();
        assert_eq!(ss.sigma_l, vec![2, 1]);
        assert_eq!(ss.sigma_r, vec![2, 1]);
        assert_eq!((ss.total_l, ss.total_r), (3, 3));

        let ss = sorted_sides(&g, &cfg("1,2,0,3")).unwrap();
        assert_eq!(ss.sigma_l, vec![2, 1]);
        assert_eq!(ss.l_order, vec![1, 0]);
        assert_eq!(ss.sigma_r, vec![3, 0]);

        // tie-break by ascending label
        let ss = sorted_sides(&g, &cfg("1,1,2,2")).unwrap();
        assert_eq!(ss.l_order, vec![0, 1]);
        assert_eq!(ss.r_order, vec![2, 3]);

        let tri = parse_graph("3 3\n0 1\n1 2\n0 2").unwrap();
        assert!(matches!(
            sorted_sides(&tri, &cfg("1,1,1")),
            Err(BipartiteError::NotBalancedCompleteBipartite)
        ));
    }

    #[test]
    fn conjugate_examples() {
        let g = k22();
        let ss = sorted_sides(&g, &cfg("2,1,2,1")).unwrap();
        let c1 = conjugate(&ss, 1).unwrap();
        assert_eq!(c1.config, cfg("1,2,1,2"));
        // j = a is the identity
        let c2 = conjugate(&ss, 2).unwrap();
        assert_eq!(c2.config, cfg("2,1,2,1"));

        let ss0 = sorted_sides(&g, &cfg("0,0,0,0")).unwrap();
        assert!(!conjugate_defined(&ss0, 1));
        assert!(matches!(
            conjugate(&ss0, 1),
            Err(BipartiteError::ConjugateUndefined { j: 1, .. })
        ));
        assert!(matches!(
            conjugate(&ss, 3),
            Err(BipartiteError::IndexOutOfRange { j: 3, a: 2 })
        ));
    }

    #[test]
    fn side_stats_examples() {
        let g = k22();
        let ss = sorted_sides(&g, &cfg("2,1,2,1")).unwrap();
        let st = side_stats(&ss);
        assert_eq!((st.ell_l, st.r_l), (1, 1));
        let ss = sorted_sides(&g, &cfg("3,3,1,0")).unwrap();
        let st = side_stats(&ss);
        assert_eq!((st.ell_l, st.r_l), (3, 2));
        assert_eq!((st.ell_r, st.r_r), (0, 0));
    }

    #[test]
    fn fire_count_examples() {
        let g = k22();
        let sigma = cfg("2,1,2,1");
        let t = fire_counts(&g, &sigma, 1, None).unwrap();
        assert_eq!(t.u[1], vec![1, 0, 1, 0]);
        assert_eq!(t.alpha_l[1], 1);
        assert_eq!(t.alpha_r[1], 1);

        let ss = sorted_sides(&g, &sigma).unwrap();
        let c1 = conjugate(&ss, 1).unwrap();
        let t = fire_counts(&g, &sigma, 1, Some(&c1)).unwrap();
        let paired = t.paired.unwrap();
        assert_eq!(paired.u[1], vec![0, 1, 0, 1]);
        // bounds of the z-lemma attained on both sides
        assert_eq!(paired.z[1][0], -1);
        assert_eq!(paired.z[1][1], 1);

        let t0 = fire_counts(&g, &sigma, 0, None).unwrap();
        assert_eq!(t0.u, vec![vec![0, 0, 0, 0]]);
    }

    #[test]
    fn lemma_battery_on_worked_example() {
        let g = k22();
        let check = check_bipartite_lemmas(&g, &cfg("2,1,2,1"), 8).unwrap();
        assert!(check.violations.is_empty(), "{:?}", check.violations);
        assert_eq!(check.activity, Ratio::new(1, 2));
    }

    #[test]
    fn theorem2_exhaustive_k22() {
        let opts = SweepOptions {
            workers: 2,
            ..Default::default()
        };
        let r = verify_theorem2(2, &Theorem2Mode::Exhaustive, &opts).unwrap();
        assert!(r.pass, "{}", r.to_json());
        assert_eq!(r.range, [4, 8]);
        assert_eq!(r.range_statement, [6, 8]);
        assert!(r.games_checked > 0);
        assert!(r.games_statement_range < r.games_checked);
    }

    #[test]
    fn theorem2_boundary_excluded() {
        // |sigma| = 2a^2 sits outside the open range: all vertices fire
        // forever, period 1
        let g = k22();
        let s = find_cycle(&g, &cfg("2,2,2,2"), 100).unwrap();
        assert_eq!(s.period(), 1);
        assert_eq!(activity(&s), Ratio::from_integer(1));
        // and an override onto that boundary makes the sweep fail honestly
        let opts = SweepOptions {
            workers: 1,
            check_battery: false,
            totals_override: Some((8, 8)),
            ..Default::default()
        };
        let r = verify_theorem2(2, &Theorem2Mode::Exhaustive, &opts).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn theorem2_sample_mode_deterministic() {
        let opts = SweepOptions {
            workers: 1,
            ..Default::default()
        };
        let opts8 = SweepOptions {
            workers: 8,
            ..Default::default()
        };
        let mode = Theorem2Mode::Sample {
            count: 200,
            seed: 5,
            cap: 4,
        };
        let a = verify_theorem2(2, &mode, &opts).unwrap();
        let b = verify_theorem2(2, &mode, &opts8).unwrap();
        assert!(a.pass, "{}", a.to_json());
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn bipartite_lemma_sweep_k22() {
        let opts = SweepOptions {
            workers: 4,
            ..Default::default()
        };
        let r = verify_bipartite_lemmas(2, &opts).unwrap();
        assert!(r.pass, "{}", r.to_json());
        // 4^4 capped configurations in total
        assert_eq!(r.games_checked, 256);
    }
}
