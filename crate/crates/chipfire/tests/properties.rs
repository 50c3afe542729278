//! Property tests over random games: conservation, periodicity and
//! minimality, firing-sequence laws, complement duality, conjugate
//! identities, and enumeration/sampling agreement.

use proptest::prelude::*;

use chipfire::analysis::{activity, complement, firing_sequence, is_clumpy, Activity};
use chipfire::bipartite::{conjugate, conjugate_defined, fire_counts, sorted_sides};
use chipfire::engine::{find_cycle, find_cycle_with, step, ChipConfig, CycleOptions};
use chipfire::graph::{generate, parse_graph, random_connected, Family, Graph};
use chipfire::sweep::{enumerate_configs, sample_config, ConfigSpace};

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..=6).prop_flat_map(|n| {
        let max_m = n * (n - 1) / 2;
        (Just(n), n - 1..=max_m, any::<u64>())
            .prop_map(|(n, m, seed)| random_connected(n, m, seed).unwrap())
    })
}

fn arb_game() -> impl Strategy<Value = (Graph, ChipConfig)> {
    arb_graph()
        .prop_flat_map(|g| {
            let n = g.n();
            (Just(g), proptest::collection::vec(0u64..8, n))
        })
        .prop_map(|(g, chips)| (g, ChipConfig::new(chips)))
}

proptest! {
    #[test]
    fn step_conserves_and_matches_edge_recount((g, sigma) in arb_game()) {
        let next = step(&g, &sigma);
        prop_assert_eq!(next.total(), sigma.total());
        // independent recount over the edge list
        let firing: Vec<bool> = (0..g.n()).map(|v| sigma[v] >= g.degree(v) as u64).collect();
        let mut expect: Vec<u64> = (0..g.n())
            .map(|v| if firing[v] { sigma[v] - g.degree(v) as u64 } else { sigma[v] })
            .collect();
        for &(u, v) in g.edges() {
            if firing[u] {
                expect[v] += 1;
            }
            if firing[v] {
                expect[u] += 1;
            }
        }
        prop_assert_eq!(next.chips(), &expect[..]);
    }

    #[test]
    fn cycles_are_periodic_minimal_and_lawful((g, sigma) in arb_game()) {
        let s = find_cycle(&g, &sigma, 1_000_000).unwrap();
        let mut cur = s.cycle_configs()[0].clone();
        for _ in 0..s.period() {
            cur = step(&g, &cur);
        }
        prop_assert_eq!(&cur, &s.cycle_configs()[0]);
        for d in 1..s.period() {
            if s.period() % d == 0 {
                let same = (0..s.period())
                    .all(|t| s.cycle_configs()[t] == s.cycle_configs()[(t + d) % s.period()]);
                prop_assert!(!same, "period {} not minimal: {} repeats", s.period(), d);
            }
        }
        let first = s.firings_of(0);
        for v in 0..g.n() {
            prop_assert_eq!(s.firings_of(v), first);
            prop_assert!(!is_clumpy(&firing_sequence(&s, v).unwrap()));
        }
        let a = activity(&s);
        prop_assert!(a >= Activity::from_integer(0) && a <= Activity::from_integer(1));
        let fires_somewhere = (0..s.period()).any(|t| (0..g.n()).any(|v| s.fires_at(t, v)));
        prop_assert_eq!(a > Activity::from_integer(0), fires_somewhere);
    }

    #[test]
    fn low_memory_detector_agrees((g, sigma) in arb_game()) {
        let a = find_cycle(&g, &sigma, 1_000_000).unwrap();
        let b = find_cycle_with(
            &g,
            &sigma,
            &CycleOptions { max_rounds: 1_000_000, low_memory: true },
        )
        .unwrap();
        prop_assert_eq!((a.t0(), a.period()), (b.t0(), b.period()));
        prop_assert_eq!(a.cycle_configs(), b.cycle_configs());
    }

    #[test]
    fn complement_is_an_involution_where_defined((g, sigma) in arb_game()) {
        if let Ok(c) = complement(&g, &sigma) {
            prop_assert_eq!(complement(&g, &c).unwrap(), sigma.clone());
            prop_assert_eq!(sigma.total() + c.total(), (4 * g.m() - g.n()) as u64);
        }
    }

    #[test]
    fn graph_file_format_roundtrips(g in arb_graph()) {
        let text = g.to_file_format();
        prop_assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn capped_enumeration_matches_closed_form(
        caps in proptest::collection::vec(0u64..5, 2..5),
        total in 0u64..16,
    ) {
        let space = ConfigSpace { caps: caps.clone(), total };
        let mut count = 0u128;
        let mut last: Option<Vec<u64>> = None;
        for c in enumerate_configs(&space) {
            prop_assert_eq!(c.total(), total);
            prop_assert!(c.chips().iter().zip(&caps).all(|(&x, &cap)| x <= cap));
            if let Some(prev) = &last {
                prop_assert!(prev.as_slice() < c.chips(), "not lexicographic");
            }
            last = Some(c.chips().to_vec());
            count += 1;
        }
        prop_assert_eq!(count, inclusion_exclusion_count(total, &caps));
    }

    #[test]
    fn sampled_configs_live_in_the_space(
        caps in proptest::collection::vec(1u64..6, 2..6),
        total_frac in 0u64..100,
        seed in any::<u64>(),
    ) {
        use rand::SeedableRng;
        let cap_sum: u64 = caps.iter().sum();
        let total = cap_sum * total_frac / 100;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let sigma = sample_config(&mut rng, &caps, total).unwrap();
        prop_assert_eq!(sigma.total(), total);
        prop_assert!(sigma.chips().iter().zip(&caps).all(|(&x, &cap)| x <= cap));
    }

    #[test]
    fn conjugates_preserve_side_totals_and_bound_fire_counts(
        a in 2usize..=3,
        chips in proptest::collection::vec(0u64..7, 6),
        j_pick in any::<usize>(),
    ) {
        let g = generate(&Family::CompleteBipartite(a, a)).unwrap();
        let sigma = ChipConfig::new(chips[..2 * a].to_vec());
        let ss = sorted_sides(&g, &sigma).unwrap();
        let j = 1 + j_pick % a;
        prop_assume!(conjugate_defined(&ss, j));
        let cj = conjugate(&ss, j).unwrap();
        // the rank shifts cancel: side totals are preserved
        let side_total = |c: &ChipConfig, lo: usize, hi: usize| -> u64 {
            c.chips()[lo..hi].iter().sum()
        };
        prop_assert_eq!(side_total(&cj.config, 0, a), ss.total_l);
        prop_assert_eq!(side_total(&cj.config, a, 2 * a), ss.total_r);
        // identity at j = a
        let id = conjugate(&ss, a).unwrap();
        prop_assert_eq!(id.config, sigma.clone());
        // per-vertex fire-count differences stay within one firing
        let tbl = fire_counts(&g, &sigma, 12, Some(&cj)).unwrap();
        let z = &tbl.paired.as_ref().unwrap().z;
        for t in 1..=12 {
            for v in 0..2 * a {
                prop_assert!((-1..=1).contains(&z[t][v]), "z_{}({}) = {}", t, v, z[t][v]);
            }
        }
    }
}

fn inclusion_exclusion_count(total: u64, caps: &[u64]) -> u128 {
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
    for mask in 0u32..(1 << n) {
        let mut shift = 0u64;
        for (i, &c) in caps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                shift += c + 1;
            }
        }
        if shift > total {
            continue;
        }
        let ways = choose((total - shift) as u128 + n as u128 - 1, n as u128 - 1) as i128;
        count += if mask.count_ones() % 2 == 0 {
            ways
        } else {
            -ways
        };
    }
    count as u128
}
