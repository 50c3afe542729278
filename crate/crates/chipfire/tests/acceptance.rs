//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`). Every
//! tolerance here is exact: a single counterexample fails the build and is
//! printed in full, since it would contradict a proven statement.

use std::sync::OnceLock;
use std::time::Instant;

use chipfire::analysis::{format_ratio, is_compliant};
use chipfire::assignment::check_assignment_lemmas;
use chipfire::bipartite::{verify_bipartite_lemmas, verify_theorem2, Theorem2Mode};
use chipfire::engine::find_cycle;
use chipfire::graph::{generate, Family};
use chipfire::report::VerificationReport;
use chipfire::sweep::{
    default_graph_stream, staircase, staircase_csv, verify_conjecture1, verify_lemma_battery,
    verify_stabilization, verify_theorem1, RandomPhase, StaircaseTable, SweepOptions,
};

const SEED: u64 = 20250811;

fn opts() -> SweepOptions {
    SweepOptions::default()
}

fn verdict(name: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {}: {} ({})",
        name,
        if pass { "PASS" } else { "FAIL" },
        detail
    );
}

/// Criterion 1: every connected graph on <= 5 vertices (one per isomorphism
/// class), every capped config with 2|E|-|V| < |sigma| < 2|E|: no eventual
/// period 3 or 4. Exact, and within the stated time budget.
#[test]
fn criterion_1_theorem1_sweep() {
    let start = Instant::now();
    let report = verify_theorem1(&default_graph_stream(5), &opts());
    let elapsed = start.elapsed();
    verdict(
        "1 theorem1-sweep",
        report.pass && !report.incomplete,
        &format!("{} games, {:.1?}", report.games_checked, elapsed),
    );
    assert!(report.pass, "counterexample found:\n{}", report.to_json());
    assert!(
        !report.incomplete,
        "sweep incomplete:\n{}",
        report.to_json()
    );
    assert!(report.games_checked > 0);
    assert!(
        elapsed.as_secs() < 300,
        "exceeded the 5-minute budget: {:?}",
        elapsed
    );
}

/// Criterion 2: the same range always yields eventual period exactly 2,
/// plus 10,000 sampled games on random connected graphs with 6-8 vertices.
#[test]
fn criterion_2_conjecture1_non_falsification() {
    let phase = RandomPhase {
        samples: 10_000,
        n_min: 6,
        n_max: 8,
        seed: SEED,
    };
    let report = verify_conjecture1(&default_graph_stream(5), Some(&phase), &opts());
    verdict(
        "2 conjecture1",
        report.pass && !report.incomplete,
        &format!("{} games incl. 10000 random", report.games_checked),
    );
    assert!(
        report.pass,
        "conjecture counterexample (a publishable finding):\n{}",
        report.to_json()
    );
    assert!(!report.incomplete);
    assert!(report.games_checked >= 10_000);
}

/// Criterion 3: period-2 range sweep on K_{a,a}: exhaustive for a = 2, 3
/// (the a = 3 sweep within 30 seconds), sampled with 10^5 configs for a = 4.
#[test]
fn criterion_3_theorem2_sweep() {
    let r2 = verify_theorem2(2, &Theorem2Mode::Exhaustive, &opts()).unwrap();
    assert!(r2.pass, "{}", r2.to_json());

    let start = Instant::now();
    let r3 = verify_theorem2(3, &Theorem2Mode::Exhaustive, &opts()).unwrap();
    let k33_elapsed = start.elapsed();
    assert!(r3.pass, "{}", r3.to_json());
    assert!(
        k33_elapsed.as_secs() < 30,
        "K_{{3,3}} exhaustive sweep took {:?}",
        k33_elapsed
    );

    let r4 = verify_theorem2(
        4,
        &Theorem2Mode::Sample {
            count: 100_000,
            seed: SEED,
            cap: 8,
        },
        &opts(),
    )
    .unwrap();
    assert!(r4.pass, "{}", r4.to_json());
    assert_eq!(r4.games_checked, 100_000);

    verdict(
        "3 theorem2-sweep",
        r2.pass && r3.pass && r4.pass,
        &format!(
            "K22 {} games, K33 {} games in {:.1?}, K44 {} sampled",
            r2.games_checked, r3.games_checked, k33_elapsed, r4.games_checked
        ),
    );
    for r in [&r2, &r3, &r4] {
        assert!(!r.incomplete);
    }
}

/// Criterion 4: stabilization bounds: |sigma| < |E| exhaustively gives
/// period 1 with activity 0; sampled |sigma| > 3|E|-|V| gives period 1 with
/// activity 1. Exact on every checked game.
#[test]
fn criterion_4_stabilization_bounds() {
    let report = verify_stabilization(&default_graph_stream(5), 50, SEED, &opts());
    verdict(
        "4 stabilization-bounds",
        report.pass && !report.incomplete,
        &format!("{} games", report.games_checked),
    );
    assert!(report.pass, "{}", report.to_json());
    assert!(!report.incomplete);
}

fn battery_report() -> &'static VerificationReport {
    static REPORT: OnceLock<VerificationReport> = OnceLock::new();
    REPORT.get_or_init(|| verify_lemma_battery(&default_graph_stream(5), &opts()))
}

/// Criterion 5: the invariant battery (conservation, equal firing counts,
/// no clumpy sequences, abundance exclusion, complement duality) holds on
/// every capped configuration of every <= 5-vertex graph. The other sweeps
/// in this suite run the same battery on each of their games.
#[test]
fn criterion_5_lemma_battery() {
    let report = battery_report();
    verdict(
        "5 lemma-battery",
        report.pass && !report.incomplete,
        &format!("{} games", report.games_checked),
    );
    assert!(report.pass, "{}", report.to_json());
    assert!(!report.incomplete);
}

/// Criterion 6: every compliant game in the <= 5-vertex sweep certifies:
/// the assignment builds, is valid, heavy edges lean forward only, deprived
/// counts match the light previous-class edges and are positive, light
/// edges number at least |V|, and |sigma| <= 2|E| - |V|. The worked C_4
/// example is checked explicitly.
#[test]
fn criterion_6_assignment_certification() {
    let report = battery_report();
    let compliant = report.parameters["compliant_games"].as_u64().unwrap();
    assert!(report.pass, "{}", report.to_json());
    assert!(compliant > 0, "sweep found no compliant games");

    let c4 = generate(&Family::Cycle(4)).unwrap();
    let s = find_cycle(&c4, &"2,1,1,0".parse().unwrap(), 1000).unwrap();
    assert_eq!(s.period(), 4);
    assert!(is_compliant(&s, &c4));
    let out = check_assignment_lemmas(&c4, &s).unwrap();
    assert!(out.violations.is_empty(), "{:?}", out.violations);
    assert_eq!(out.light_edges, 4);
    assert_eq!(out.total_chips, 4); // the 2|E| - |V| bound attained

    verdict(
        "6 assignment-certification",
        true,
        &format!("{} compliant games certified", compliant),
    );
}

/// Criterion 7: bipartite lemma battery on every capped K_{2,2} and
/// K_{3,3} configuration: confinement when 0 < A < 1, z-bounds up to 4T
/// for every defined conjugate, exact activity equality, the u_{2t} growth
/// law, and the sorted per-rank bound for in-range configs.
#[test]
fn criterion_7_bipartite_lemmas() {
    let r2 = verify_bipartite_lemmas(2, &opts()).unwrap();
    assert!(r2.pass, "{}", r2.to_json());
    assert_eq!(r2.games_checked, 256); // 4^4 capped configs
    let r3 = verify_bipartite_lemmas(3, &opts()).unwrap();
    assert!(r3.pass, "{}", r3.to_json());
    assert_eq!(r3.games_checked, 46_656); // 6^6 capped configs
    verdict(
        "7 bipartite-lemmas",
        r2.pass && r3.pass,
        &format!("{} + {} configs", r2.games_checked, r3.games_checked),
    );
    assert!(!r2.incomplete && !r3.incomplete);
}

fn assert_stairs(g_name: &str, table: &StaircaseTable, m: u64, n: u64) {
    assert!(
        table.battery_failures.is_empty(),
        "{}: battery failures {:?}",
        g_name,
        table.battery_failures
    );
    assert_eq!(table.rows.len() as u64, 4 * m + 1);
    for row in &table.rows {
        assert_eq!(row.budget_exceeded, 0, "{} total {}", g_name, row.total);
        let lo = row.activity_min.as_ref().unwrap();
        let hi = row.activity_max.as_ref().unwrap();
        let expect = if row.total < m {
            Some("0")
        } else if row.total > 3 * m - n {
            Some("1")
        } else if row.total > 2 * m - n && row.total < 2 * m {
            Some("1/2")
        } else {
            None
        };
        if let Some(e) = expect {
            assert_eq!(
                format_ratio(lo),
                e,
                "{} total {}: activity_min off the stair",
                g_name,
                row.total
            );
            assert_eq!(
                format_ratio(hi),
                e,
                "{} total {}: activity_max off the stair",
                g_name,
                row.total
            );
        }
    }
}

/// Criterion 8: staircase tables for K_{4,4} and K_6 with 50 samples per
/// total: activity exactly 0 below |E|, exactly 1 above 3|E|-|V|, and
/// exactly 1/2 on the middle stair 2|E|-|V| < |sigma| < 2|E|.
#[test]
fn criterion_8_staircase_stairs() {
    let k44 = generate(&Family::CompleteBipartite(4, 4)).unwrap();
    let t44 = staircase(&k44, 50, SEED, 1_000_000, &opts());
    assert_stairs("K_{4,4}", &t44, 16, 8);

    let k6 = generate(&Family::Complete(6)).unwrap();
    let t6 = staircase(&k6, 50, SEED, 1_000_000, &opts());
    assert_stairs("K_6", &t6, 15, 6);

    verdict(
        "8 staircase",
        true,
        &format!(
            "{} + {} rows, 50 samples each",
            t44.rows.len(),
            t6.rows.len()
        ),
    );
}

/// Criterion 9: verify and staircase runs with a fixed seed produce
/// byte-identical reports at worker counts 1 and 8.
#[test]
fn criterion_9_determinism() {
    let with_workers = |w: usize| SweepOptions {
        workers: w,
        ..Default::default()
    };

    let graphs = default_graph_stream(4);
    let phase = RandomPhase {
        samples: 200,
        n_min: 6,
        n_max: 8,
        seed: SEED,
    };
    let v1 = verify_conjecture1(&graphs, Some(&phase), &with_workers(1)).to_json();
    let v8 = verify_conjecture1(&graphs, Some(&phase), &with_workers(8)).to_json();
    assert_eq!(v1, v8, "verify reports differ across worker counts");

    let mode = Theorem2Mode::Sample {
        count: 500,
        seed: SEED,
        cap: 8,
    };
    let t1 = verify_theorem2(4, &mode, &with_workers(1))
        .unwrap()
        .to_json();
    let t8 = verify_theorem2(4, &mode, &with_workers(8))
        .unwrap()
        .to_json();
    assert_eq!(t1, t8, "theorem2 reports differ across worker counts");

    let c5 = generate(&Family::Cycle(5)).unwrap();
    let s1 = staircase_csv(&staircase(&c5, 20, SEED, 1_000_000, &with_workers(1)));
    let s8 = staircase_csv(&staircase(&c5, 20, SEED, 1_000_000, &with_workers(8)));
    assert_eq!(s1, s8, "staircase CSV differs across worker counts");

    verdict(
        "9 determinism",
        true,
        "verify, theorem2, staircase byte-identical at 1 and 8 workers",
    );
}
