mod common;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use spreadrank::centrality::{
    betweenness_centrality, closeness_centrality, degree_centrality, dic, eigenvector_centrality, mvc,
    propagation_centrality, BetweennessMode, DicConfig, DistanceMode, MvcConfig, MvcInit, NodeAttributes, PcConfig,
    PowerIterationConfig,
};
use spreadrank::{DegreeMode, Direction, DirectedGraph, ScoreVector};

fn graph_of(seed: u64, n: usize, p: f64) -> EdgeList {
    random_digraph(&mut rng(seed), n, p, 3)
}

fn traditional(g: &DirectedGraph) -> Vec<ScoreVector> {
    let mut out = vec![
        degree_centrality(g, DegreeMode::In),
        degree_centrality(g, DegreeMode::Out),
        degree_centrality(g, DegreeMode::Total),
        closeness_centrality(g),
        betweenness_centrality(g, BetweennessMode::Exact, DistanceMode::Hops).unwrap(),
    ];
    if g.edge_count() > 0 {
        out.push(eigenvector_centrality(g, PowerIterationConfig::default()).unwrap());
    }
    out
}

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn sampled_betweenness_with_every_pivot_is_exact(seed in any::<u64>(), n in 1usize..40, p in 0.0..0.2f64) {
        let g = graph_of(seed, n, p).graph(Direction::InfoFlow);
        let exact = betweenness_centrality(&g, BetweennessMode::Exact, DistanceMode::Hops).unwrap();
        let sampled = betweenness_centrality(&g, BetweennessMode::Sampled { k: n, seed }, DistanceMode::Hops).unwrap();
        prop_assert_eq!(exact.scores, sampled.scores);
    }

    #[test]
    fn traditional_metrics_follow_relabelling(seed in any::<u64>(), n in 2usize..30, p in 0.05..0.3f64) {
        let mut r = rng(seed);
        let e = random_strongly_connected(&mut r, n, p, 1);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        let moved = EdgeList::new(n, e.edges.iter().map(|&(u, v, w)| (perm[u], perm[v], w)));
        let before = traditional(&e.graph(Direction::InfoFlow));
        let after = traditional(&moved.graph(Direction::InfoFlow));
        for (a, b) in before.iter().zip(&after) {
            for v in 0..n {
                let (x, y) = (a.scores[v], b.scores[perm[v]]);
                prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "{:?} node {}: {} vs {}", a.metric, v, x, y);
            }
        }
    }

    #[test]
    fn pc_is_a_positive_distribution(seed in any::<u64>(), n in 1usize..200, p in 0.0..0.05f64, d in 0.05..0.95f64) {
        let g = graph_of(seed, n, p).graph(Direction::InfoFlow);
        let cfg = PcConfig { damping: d, ..PcConfig::default() };
        let s = propagation_centrality(&g, &cfg).unwrap();
        prop_assert!((s.scores.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        prop_assert!(s.scores.iter().all(|&v| v > 0.0));
        prop_assert_eq!(s.params["converged"].as_bool(), Some(true));
        prop_assert!(s.iterations_run <= 100);
    }

    #[test]
    fn mvc_grows_with_exposure_when_vulnerability_is_equal(seed in any::<u64>(), n in 2usize..40, p in 0.0..0.3f64, steps in 1u32..10) {
        let e = graph_of(seed, n, p);
        let g = e.graph(Direction::InfoFlow);
        let mut attrs = NodeAttributes::empty(n);
        attrs.vulnerability = vec![Some(0.4); n];
        let cfg = MvcConfig { init: MvcInit::Attribute, steps, ..MvcConfig::default() };
        let s = mvc(&g, Some(&attrs), &cfg).unwrap();
        for a in 0..n {
            for b in 0..n {
                if e.in_degree(a) < e.in_degree(b) {
                    prop_assert!(s.scores[a] <= s.scores[b]);
                }
            }
        }
    }

    #[test]
    fn novel_metrics_are_deterministic(seed in any::<u64>(), n in 1usize..80, p in 0.0..0.1f64) {
        let g = graph_of(seed, n, p).graph(Direction::InfoFlow);
        let mvc_cfg = MvcConfig { init: MvcInit::SeededUniform { seed }, ..MvcConfig::default() };
        let run = || {
            (
                propagation_centrality(&g, &PcConfig::default()).unwrap(),
                mvc(&g, None, &mvc_cfg).unwrap(),
                dic(&g, &DicConfig::default()).unwrap(),
            )
        };
        prop_assert_eq!(run(), run());
    }
}

#[test]
fn complete_digraph_has_zero_betweenness() {
    for n in 1..12 {
        let e = EdgeList::new(n, (0..n).flat_map(|u| (0..n).map(move |v| (u, v, 1.0))));
        let s = betweenness_centrality(&e.graph(Direction::InfoFlow), BetweennessMode::Exact, DistanceMode::Hops).unwrap();
        assert!(s.scores.iter().all(|&v| v == 0.0));
    }
}

#[test]
fn pc_is_uniform_on_regular_bidirectional_graphs() {
    // Circulant graphs: node i links both ways to i±1, ..., i±k.
    for n in [5usize, 12, 31] {
        for k in 1..=2 {
            let e = EdgeList::new(
                n,
                (0..n).flat_map(|i| (1..=k).flat_map(move |j| [(i, (i + j) % n, 1.0), ((i + j) % n, i, 1.0)])),
            );
            let s = propagation_centrality(&e.graph(Direction::InfoFlow), &PcConfig::default()).unwrap();
            for v in s.scores {
                assert!((v - 1.0 / n as f64).abs() < 1e-12);
            }
        }
    }
}
