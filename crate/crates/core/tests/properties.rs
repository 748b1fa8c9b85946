use ghforge_core::bruteforce;
use ghforge_core::certificate::sparsify;
use ghforge_core::graph::cut_value;
use ghforge_core::io::{emit_graph, emit_tree, parse_graph, parse_tree};
use ghforge_core::isolating::{call_budget, isolating_cuts};
use ghforge_core::maxflow::{max_flow_value, st_mincut_minimal};
use ghforge_core::partial_tree::{partial_tree, BruteForceOracle, PartialTreeConfig};
use ghforge_core::pipeline::{default_c, gh_tree_classic, gh_tree_fast, FastConfig};
use ghforge_core::wellinked::{partition_high_degree, PartitionConfig};
use ghforge_core::{CapacityGraph, SimpleGraph};
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            SimpleGraph::new(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

fn graph_with_subset(max_n: usize) -> impl Strategy<Value = (SimpleGraph, Vec<usize>)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (
            Just(g),
            proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn max_flow_matches_enumeration(g in graph(9), s in 0usize..9, t in 0usize..9) {
        let (s, t) = (s % g.n(), t % g.n());
        prop_assume!(s != t);
        let cg = g.to_cap_graph();
        let expected = bruteforce::mincut(&g, s, t);
        prop_assert_eq!(max_flow_value(&cg, s, t).unwrap(), expected);
        let cut = st_mincut_minimal(&cg, s, t).unwrap();
        prop_assert_eq!(cut.side, bruteforce::minimal_side(&g, &[s], &[t]).0);
    }

    #[test]
    fn isolating_cuts_are_minimal_and_disjoint((g, t) in graph_with_subset(10)) {
        prop_assume!(t.len() >= 2);
        let r = isolating_cuts(&g.to_cap_graph(), &t).unwrap();
        prop_assert!(r.maxflow_call_count <= call_budget(t.len()));
        let mut owner = vec![None; g.n()];
        for (v, cut) in &r.cuts {
            let rest: Vec<usize> = t.iter().copied().filter(|w| w != v).collect();
            let (side, value) = bruteforce::minimal_side(&g, &[*v], &rest);
            prop_assert_eq!(cut.value, value);
            prop_assert_eq!(&cut.side, &side);
            for &w in &cut.side {
                prop_assert!(owner[w].is_none());
                owner[w] = Some(*v);
            }
        }
    }

    #[test]
    fn certificate_preserves_small_cuts(g in graph(9), k in 1usize..5) {
        let h = sparsify(&g, k).unwrap();
        prop_assert!(h.m() <= g.m().min(k * (g.n() - 1)));
        for (side, value) in bruteforce::all_cuts(&g) {
            let hv = cut_value(&h, &side).unwrap();
            prop_assert!(value.min(k as u64) <= hv && hv <= value);
        }
    }

    #[test]
    fn trees_are_cut_equivalent(g in graph(10), seed in any::<u64>()) {
        let expected = bruteforce::all_pairs(&g);
        let classic = gh_tree_classic(&g).unwrap();
        prop_assert_eq!(classic.all_pairs(), expected.clone());
        let cfg = FastConfig { seed, ..FastConfig::default() };
        let fast = gh_tree_fast(&g, default_c(g.n()), &cfg).unwrap().tree;
        prop_assert_eq!(fast.all_pairs(), expected);
    }

    #[test]
    fn fast_tree_with_any_threshold(g in graph(9), c in 1usize..9) {
        let fast = gh_tree_fast(&g, c, &FastConfig::default()).unwrap().tree;
        prop_assert_eq!(fast.all_pairs(), bruteforce::all_pairs(&g));
    }

    #[test]
    fn partial_tree_captures_small_cuts((g, u) in graph_with_subset(10), k in 1u64..6, seed in any::<u64>()) {
        let mut oracle = BruteForceOracle::new(k);
        let cfg = PartialTreeConfig { seed, ..PartialTreeConfig::default() };
        let pt = partial_tree(&g.to_cap_graph(), &u, k, &mut oracle, &cfg).unwrap().tree;
        let pairs = bruteforce::all_pairs(&g);
        prop_assert!(pt.edges().iter().all(|e| e.2 <= k));
        for &a in &u {
            for &b in &u {
                if a < b && pairs[a][b] <= k {
                    prop_assert_eq!(pt.separation(a, b), Some(pairs[a][b]));
                }
            }
        }
        for &t in pt.terminals() {
            prop_assert!(u.contains(&t));
        }
    }

    #[test]
    fn partition_covers_high_degree_vertices(g in graph(10), d in 1usize..6) {
        let report = partition_high_degree(&g, d, &PartitionConfig::default()).unwrap();
        let mut covered: Vec<usize> = report.clusters.iter().flat_map(|c| c.members.clone()).collect();
        covered.sort_unstable();
        prop_assert_eq!(covered, g.high_degree(d));
    }

    #[test]
    fn formats_round_trip(g in graph(10)) {
        prop_assert_eq!(parse_graph(&emit_graph(&g)).unwrap(), g.clone());
        let t = gh_tree_classic(&g).unwrap();
        prop_assert_eq!(parse_tree(&emit_tree(&t)).unwrap(), t);
    }
}
