mod common;

use common::*;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use pzf_core::derived::{psd_throttling_number, th_alpha, th_pzf, th_pzf_graph, SearchMode};
use pzf_core::exact::successor_distribution;
use pzf_core::graph::Combinations;
use pzf_core::kernels::{psd_round, round_kernel, zf_round};
use pzf_core::montecarlo::simulate_trial;
use pzf_core::prob::rational;
use pzf_core::{
    build_chain, ept_exact, ept_graph, is_zero_forcing_set, lround_probability, propagation_time, Caps, Graph,
    Rational, Rule, VertexSet,
};

/// Connected graph on `2..=max_n` vertices: a random recursive tree plus
/// random extra edges.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|v| (0..v).boxed()).collect();
        (Just(n), parents, proptest::collection::vec(any::<bool>(), n * (n - 1) / 2), 0.0..0.6f64).prop_map(
            |(n, parents, bits, density)| {
                let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
                let mut k = 0;
                for v in 0..n {
                    for u in 0..v {
                        let keep = bits[k] && (k as f64 / bits.len() as f64) < density;
                        k += 1;
                        if keep && !edges.contains(&(u, v)) {
                            edges.push((u, v));
                        }
                    }
                }
                Graph::from_edges(n, edges).unwrap()
            },
        )
    })
}

fn tree(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|v| (0..v).boxed()).collect();
        parents.prop_map(move |p| Graph::from_edges(n, p.iter().enumerate().map(|(i, &u)| (u, i + 1))).unwrap())
    })
}

fn graph_and_set(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet)> {
    connected_graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), 1u64..(1u64 << n)).prop_map(move |(g, m)| (g, VertexSet::from_mask(n, m)))
    })
}

fn graph_and_nested_sets(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet, VertexSet)> {
    connected_graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), 1u64..(1u64 << n), any::<u64>()).prop_map(move |(g, a, extra)| {
            let b = a | (extra & ((1u64 << n) - 1));
            (g, VertexSet::from_mask(n, a), VertexSet::from_mask(n, b))
        })
    })
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_is_symmetric_and_loop_free(g in connected_graph(12)) {
        for v in 0..g.n() {
            prop_assert!(!g.has_edge(v, v));
            for u in g.neighbors(v) {
                prop_assert!(g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn distances_satisfy_triangle_inequality(g in connected_graph(12)) {
        let d: Vec<Vec<usize>> = (0..g.n()).map(|v| g.distances(v).into_iter().map(Option::unwrap).collect()).collect();
        for a in 0..g.n() {
            for b in 0..g.n() {
                prop_assert_eq!(d[a][b], d[b][a]);
                for c in 0..g.n() {
                    prop_assert!(d[a][c] <= d[a][b] + d[b][c]);
                }
            }
        }
    }

    #[test]
    fn greedy_dominating_set_dominates(g in connected_graph(12)) {
        let d = g.greedy_dominating_set();
        prop_assert!((0..g.n()).all(|v| d.contains(v) || g.neighbors(v).intersects(&d)));
    }

    #[test]
    fn exact_k_center_is_optimal(g in connected_graph(9), k in 1usize..4) {
        let k = k.min(g.n());
        let seed = g.k_center_seed(k, u64::MAX).unwrap();
        prop_assert!(seed.exact);
        let brute = Combinations::new(g.n(), k)
            .map(|c| g.covering_radius(&VertexSet::from_vertices(g.n(), c)).unwrap())
            .min()
            .unwrap();
        prop_assert_eq!(seed.covering_radius, brute);
        prop_assert_eq!(g.covering_radius(&seed.seeds), Some(brute));
    }

    #[test]
    fn round_operators_grow_and_nest((g, b) in graph_and_set(10)) {
        let zf = zf_round(&g, &b);
        let psd = psd_round(&g, &b);
        prop_assert!(b.is_subset(&zf));
        prop_assert!(zf.is_subset(&psd));
        let kernel = round_kernel::<Rational>(&g, &b);
        for w in zf.difference(&b).iter() {
            prop_assert!(kernel.probability(w).is_one());
        }
    }

    #[test]
    fn kernel_marginals_match_fire_enumeration((g, b) in graph_and_set(7)) {
        let fires: usize = b.iter().map(|u| g.neighbors(u).difference_len(&b)).sum();
        prop_assume!(fires <= 12);
        let rows = oracle_successors(&g, mask_of(&b));
        let kernel = round_kernel::<Rational>(&g, &b);
        for w in b.complement().iter() {
            let marginal: Rational = rows.iter().filter(|(s, _)| *s >> w & 1 == 1).map(|(_, p)| p.clone()).sum();
            prop_assert_eq!(kernel.probability(w), marginal);
        }
    }

    #[test]
    fn psd_always_finishes_on_trees(t in tree(12), m in 1u64..4096) {
        let z = VertexSet::from_mask(t.n(), m & ((1u64 << t.n()) - 1));
        prop_assume!(!z.is_empty());
        prop_assert!(propagation_time(&t, &z, Rule::Psd).is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn successor_mass_is_exactly_one((g, b) in graph_and_set(8)) {
        let dist = successor_distribution::<Rational>(&g, &b, &Caps::default()).unwrap();
        let total: Rational = dist.iter().map(|(_, p)| p.clone()).sum();
        prop_assert_eq!(total, Rational::one());
        prop_assert!(dist.iter().all(|(s, _)| b.is_subset(s)));
    }

    #[test]
    fn lround_is_monotone_and_approaches_one((g, b) in graph_and_set(7)) {
        let chain = build_chain::<Rational>(&g, &b, &Caps::default()).unwrap();
        let mut prev = Rational::zero();
        let mut reached = false;
        for d in chain.walk().take(400) {
            let p = d.absorbed();
            prop_assert!(p >= prev);
            if to_f64(&p) > 1.0 - 1e-6 {
                reached = true;
                break;
            }
            prev = p;
        }
        prop_assert!(reached);
    }

    #[test]
    fn zero_forcing_sets_finish_by_pt((g, b) in graph_and_set(8)) {
        if let Some(pt) = propagation_time(&g, &b, Rule::ZeroForcing) {
            prop_assert!(is_zero_forcing_set(&g, &b));
            for l in pt..pt + 3 {
                prop_assert_eq!(lround_probability::<Rational>(&g, &b, l, &Caps::default()).unwrap(), Rational::one());
            }
        }
    }

    #[test]
    fn lround_is_monotone_in_the_start_set((g, a, b) in graph_and_nested_sets(7)) {
        let caps = Caps::default();
        let ca = build_chain::<Rational>(&g, &a, &caps).unwrap();
        let cb = build_chain::<Rational>(&g, &b, &caps).unwrap();
        for (da, db) in ca.walk().zip(cb.walk()).take(2 * g.n() + 1) {
            prop_assert!(da.absorbed() <= db.absorbed(), "round {}", da.round);
        }
        prop_assert!(ca.expected_time().unwrap() >= cb.expected_time().unwrap());
    }

    #[test]
    fn radius_bounds_ept(g in connected_graph(7)) {
        let (rad, _) = g.radius_and_center().unwrap();
        let (ept, _) = ept_graph::<Rational>(&g, &Caps::default()).unwrap();
        prop_assert!(Rational::from_integer((rad as i64).into()) <= ept);
    }

    #[test]
    fn psd_time_bounds_ept_on_trees(t in tree(8), m in 1u64..256) {
        let z = VertexSet::from_mask(t.n(), m & ((1u64 << t.n()) - 1));
        prop_assume!(!z.is_empty());
        let pt = propagation_time(&t, &z, Rule::Psd).unwrap();
        let ept = ept_exact::<Rational>(&t, &z, &Caps::default()).unwrap();
        prop_assert!(Rational::from_integer((pt as i64).into()) <= ept);
    }

    #[test]
    fn lround_at_large_ell_respects_markov_bound(g in connected_graph(7)) {
        let caps = Caps::default();
        let (ept, v) = ept_graph::<Rational>(&g, &caps).unwrap();
        let start = VertexSet::from_vertices(g.n(), [v]);
        let ell = to_f64(&ept).floor() as usize + 1;
        for l in [ell, ell + 1, 2 * ell] {
            let p = lround_probability::<Rational>(&g, &start, l, &caps).unwrap();
            let bound = Rational::one() - ept.clone() / Rational::from_integer((l as i64).into());
            prop_assert!(p >= bound, "ell = {}", l);
        }
    }

    #[test]
    fn ept_matches_truncated_series((g, b) in graph_and_set(7)) {
        // ept = Σ_{r<R} P(T > r) + E[(T - R)^+], and the tail is at most
        // P(T > R) times the largest expected time from any state.
        let chain = build_chain::<f64>(&g, &b, &Caps::default()).unwrap();
        let times = chain.expected_times().unwrap();
        let worst = times.iter().cloned().fold(0.0, f64::max);
        let mut partial = 0.0;
        let mut survive = 1.0;
        for d in chain.walk().take(200) {
            survive = 1.0 - d.absorbed();
            partial += survive;
        }
        let ept = chain.expected_time().unwrap();
        prop_assert!(ept >= partial - 1e-9);
        prop_assert!(ept <= partial + survive * worst + 1e-9);
    }

    #[test]
    fn float_weights_track_exact((g, b) in graph_and_set(7)) {
        let caps = Caps::default();
        let exact = ept_exact::<Rational>(&g, &b, &caps).unwrap();
        let float = ept_exact::<f64>(&g, &b, &caps).unwrap();
        prop_assert!((to_f64(&exact) - float).abs() <= 1e-9);
    }

    #[test]
    fn trajectories_are_monotone((g, b) in graph_and_set(12), seed in any::<u64>(), trial in 0u64..1000) {
        let t = simulate_trial(&g, &b, seed, trial, 10_000, true).unwrap();
        let traj = t.trajectory.unwrap();
        prop_assert_eq!(traj.len() as u64, t.rounds + 1);
        prop_assert!(traj.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(*traj.last().unwrap(), g.n());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn dominating_set_value_bounds_throttling(g in connected_graph(6)) {
        let caps = Caps::default();
        let d = g.greedy_dominating_set();
        let via_d = th_pzf::<Rational>(&g, &d, &caps).unwrap();
        let best = th_pzf_graph::<Rational>(&g, SearchMode::ExactExhaustive, &caps, 12).unwrap();
        prop_assert!(best.value <= via_d);
        prop_assert_eq!(th_pzf::<Rational>(&g, &best.witness, &caps).unwrap(), best.value.clone());
        let heuristic = th_pzf_graph::<Rational>(&g, SearchMode::Heuristic, &caps, 12).unwrap();
        prop_assert!(best.value <= heuristic.value);
    }

    #[test]
    fn throttling_dominates_psd_on_trees(t in tree(7)) {
        let caps = Caps::default();
        let best = th_pzf_graph::<Rational>(&t, SearchMode::ExactExhaustive, &caps, 12).unwrap();
        let (psd, _) = psd_throttling_number(&t, 12).unwrap();
        prop_assert!(Rational::from_integer((psd as i64).into()) <= best.value);
    }

    #[test]
    fn confidence_throttling_time_respects_markov_bound(g in connected_graph(6), which in 0usize..3) {
        let caps = Caps::default();
        let alpha = [rational(1, 2), rational(9, 10), rational(99, 100)][which].clone();
        let r = th_alpha(&g, &alpha, SearchMode::ExactExhaustive, &caps, 12).unwrap();
        let time = r.value - r.witness.len();
        let ept = ept_exact::<Rational>(&g, &r.witness, &caps).unwrap();
        let bound = ept / (Rational::one() - alpha);
        prop_assert!(Rational::from_integer((time as i64).into()) <= bound);
    }
}
