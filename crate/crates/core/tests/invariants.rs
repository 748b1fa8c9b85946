use ghforge_core::bruteforce;
use ghforge_core::certificate::sparsify;
use ghforge_core::generate::{complete, generate, Family};
use ghforge_core::graph::{contract, cut_value, VertexGrouping};
use ghforge_core::maxflow::{max_flow_value, st_mincut_minimal};
use ghforge_core::partial_tree::{partial_tree_step, BruteForceOracle};
use ghforge_core::pipeline::{default_c, gh_tree_fast_observed, FastConfig};
use ghforge_core::rng;
use ghforge_core::sstmincut::{single_source_mincut, SamplerConfig};
use ghforge_core::wellinked::{
    exact_wellinked_phi, verify_wellinked, wellinked_subsets, Backend, ExactDecomposer,
    PartitionConfig,
};
use ghforge_core::{CapacityGraph, PartialTree, SimpleGraph};
use proptest::prelude::*;

fn graph(min_n: usize, max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (min_n..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            SimpleGraph::new(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n) - 1).map(move |m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cut_function_is_symmetric_and_contraction_preserves_it(
        g in graph(2, 9),
        labels in proptest::collection::vec(0usize..4, 9),
    ) {
        let n = g.n();
        let identity = contract(&g, &VertexGrouping::identity(n)).unwrap();
        for side in subsets(n) {
            let rest: Vec<usize> = (0..n).filter(|v| !side.contains(v)).collect();
            let value = cut_value(&g, &side).unwrap();
            prop_assert_eq!(value, cut_value(&g, &rest).unwrap());
            prop_assert_eq!(value, cut_value(&identity, &side).unwrap());
        }
        let mut ids = std::collections::BTreeMap::new();
        let group: Vec<usize> = labels[..n]
            .iter()
            .map(|&l| {
                let next = ids.len();
                *ids.entry(l).or_insert(next)
            })
            .collect();
        let grouping = VertexGrouping::new(group.clone()).unwrap();
        let q = contract(&g, &grouping).unwrap();
        for qside in subsets(q.n()) {
            let side: Vec<usize> = (0..n).filter(|&v| qside.contains(&group[v])).collect();
            prop_assert_eq!(cut_value(&q, &qside).unwrap(), cut_value(&g, &side).unwrap());
        }
    }

    #[test]
    fn flow_duality_and_symmetry(g in graph(2, 10)) {
        let cg = g.to_cap_graph();
        for s in 0..g.n() {
            for t in 0..g.n() {
                if s == t {
                    continue;
                }
                let cut = st_mincut_minimal(&cg, s, t).unwrap();
                prop_assert_eq!(cut_value(&cg, &cut.side).unwrap(), cut.value);
                prop_assert_eq!(cut.value, max_flow_value(&cg, t, s).unwrap());
            }
        }
    }

    #[test]
    fn sparsifying_twice_keeps_the_certificate(g in graph(2, 10), k in 1usize..5) {
        let h = sparsify(&sparsify(&g, k).unwrap(), k).unwrap();
        for (side, value) in bruteforce::all_cuts(&g) {
            let hv = cut_value(&h, &side).unwrap();
            prop_assert!(value.min(k as u64) <= hv && hv <= value);
        }
    }

    #[test]
    fn subset_filter_accounting(g in graph(3, 12), d in 1usize..5, exact in any::<bool>()) {
        let u = g.high_degree(d);
        let cfg = if exact {
            PartitionConfig { backend: Backend::Exact(ExactDecomposer::default()), cert_cap: 12 }
        } else {
            PartitionConfig::default()
        };
        let report = wellinked_subsets(&g, &u, d, &cfg).unwrap();
        prop_assert_eq!(report.x_sum, 2 * report.inter_cluster_edges);
        prop_assert!(2 * report.covered >= report.u_size);
        for c in &report.clusters {
            if c.members.len() <= 12 {
                prop_assert!(verify_wellinked(&g, &c.members, d, c.phi).unwrap());
            }
        }
    }

    #[test]
    fn step_records_only_sound_cuts(g in graph(2, 12), k in 1u64..6, seed in any::<u64>()) {
        let cg = g.to_cap_graph();
        let u: Vec<usize> = (0..g.n()).collect();
        let origin: Vec<Option<usize>> = u.iter().map(|&v| Some(v)).collect();
        let mut r = rng::stream(seed, &[0]);
        let s = (seed % g.n() as u64) as usize;
        let step = partial_tree_step(&cg, s, &u, k, &mut BruteForceOracle::new(k), &origin, &mut r).unwrap();
        let mut covered = Vec::new();
        for (v, cut) in &step.cuts {
            prop_assert!(!cut.contains(s) && cut.contains(*v));
            prop_assert!(2 * cut.len() <= u.len());
            prop_assert_eq!(cut.value, max_flow_value(&cg, s, *v).unwrap());
            prop_assert!(cut.value <= k);
            covered.extend(cut.side.iter().copied());
        }
        covered.sort_unstable();
        prop_assert_eq!(covered, step.d);
    }

    #[test]
    fn every_level_captures_up_to_twice_d(g in graph(2, 16), seed in any::<u64>()) {
        let pairs = bruteforce_pairs(&g);
        let mut trees: Vec<(usize, PartialTree)> = Vec::new();
        let cfg = FastConfig { seed, ..FastConfig::default() };
        let c = default_c(g.n());
        gh_tree_fast_observed(&g, c, &cfg, &mut |d, pt| trees.push((d, pt.clone()))).unwrap();
        for (i, (d, pt)) in trees.iter().enumerate() {
            let limit = if *d == 0 { c as u64 } else { 2 * *d as u64 };
            prop_assert!(pt.edges().iter().all(|e| e.2 <= limit));
            for u in 0..g.n() {
                for v in u + 1..g.n() {
                    if pairs[u][v] <= limit {
                        prop_assert_eq!(pt.separation(u, v), Some(pairs[u][v]));
                    }
                }
            }
            if i > 0 {
                prop_assert!(pt.is_refinement_of(&trees[i - 1].1));
            }
        }
    }
}

fn bruteforce_pairs(g: &SimpleGraph) -> Vec<Vec<u64>> {
    let cg = g.to_cap_graph();
    (0..g.n())
        .map(|u| {
            (0..g.n())
                .map(|v| {
                    if u == v {
                        u64::MAX
                    } else {
                        max_flow_value(&cg, u, v).unwrap()
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn single_source_rounds_unbalancedness_and_safety() {
    let mut cases = vec![(complete(6), (0..6).collect::<Vec<_>>(), 5)];
    for seed in 0..30u64 {
        let g = generate(&Family::Gnp { n: 9, p: 0.7 }, seed).unwrap();
        let d = 4;
        let x: Vec<usize> = g.high_degree(d).into_iter().take(7).collect();
        if x.len() >= 2 {
            cases.push((g, x, d));
        }
    }
    for (i, (g, x, d)) in cases.into_iter().enumerate() {
        let cg = g.to_cap_graph();
        let phi = exact_wellinked_phi(&cg, &x, d).unwrap().min(1.0);
        if phi <= 0.0 {
            continue;
        }
        assert!(verify_wellinked(&g, &x, d, phi).unwrap());
        let cfg = SamplerConfig::new(phi, g.n(), 4.0, i as u64).unwrap();
        let p = x[0];
        let val = single_source_mincut(&cg, &x, d as u64, phi, p, &cfg).unwrap();
        assert!(val.stats.isolating_calls <= cfg.rounds);
        let t = val.stats.max_terminals as u64;
        let log = 64 - t.saturating_sub(1).leading_zeros() as u64;
        assert!(val.stats.maxflow_calls <= cfg.rounds as u64 * (log + t));
        for &v in x.iter().filter(|&&v| v != p) {
            let truth = max_flow_value(&cg, p, v).unwrap();
            assert!(val.get(v).unwrap() >= truth.min(2 * d as u64));
            if truth <= 2 * d as u64 {
                for side in bruteforce::all_min_sides(&g, &[p], &[v]) {
                    let a = x.iter().filter(|w| side.contains(w)).count();
                    let smaller = a.min(x.len() - a) as f64;
                    assert!(smaller <= 2.0 / phi + 1e-9, "case {i}: {smaller} > 2/{phi}");
                }
            }
        }
    }
}

#[test]
fn generators_are_pure() {
    let families = [
        Family::Gnp { n: 12, p: 0.4 },
        Family::Barbell { size: 4 },
        Family::Grid { rows: 3, cols: 4 },
        Family::RegularIsh { n: 12, degree: 3 },
        Family::PlantedClusters {
            clusters: 3,
            size: 4,
            p_in: 0.8,
            p_out: 0.1,
        },
    ];
    for f in &families {
        assert_eq!(generate(f, 9).unwrap(), generate(f, 9).unwrap());
    }
}
