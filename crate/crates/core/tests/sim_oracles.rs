mod common;

use std::collections::BTreeSet;

use common::published::{self, TRADITIONAL};
use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use spreadrank::rank::RankingTable;
use spreadrank::sim::{
    intervention_experiment, metric_removal_set, spread_estimate, spread_volume, trial_volumes, CascadeConfig,
    CascadeModel, RemovalStrategy,
};
use spreadrank::{Direction, DirectedGraph, Metric};

fn ic(p: f64, trials: usize, seed: u64, seeds: Vec<usize>) -> CascadeConfig {
    CascadeConfig {
        model: CascadeModel::IndependentCascade {
            p,
            trials,
            seed,
            weighted: false,
        },
        seeds,
    }
}

fn reach(seeds: Vec<usize>) -> CascadeConfig {
    CascadeConfig {
        model: CascadeModel::Reachability,
        seeds,
    }
}

/// Random graph with at most `max_edges` distinct edges.
fn small_graph(r: &mut rand_chacha::ChaCha8Rng, n: usize, max_edges: usize) -> EdgeList {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v).collect();
    pairs.shuffle(r);
    let m = r.gen_range(1..=max_edges.min(pairs.len()));
    EdgeList::new(n, pairs[..m].iter().map(|&(u, v)| (u, v, 1.0)))
}

fn without(e: &EdgeList, removed: &BTreeSet<usize>) -> EdgeList {
    EdgeList::new(
        e.n,
        e.edges.iter().copied().filter(|(u, v, _)| !removed.contains(u) && !removed.contains(v)),
    )
}

#[test]
fn eight_node_cascade_matches_enumeration() {
    let e = EdgeList::new(
        8,
        [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 3), (2, 6), (6, 7), (7, 4)]
            .map(|(u, v)| (u, v, 1.0)),
    );
    let exact = cascade_oracle(&e, &[0], 0.5);
    let est = spread_estimate(&e.graph(Direction::InfoFlow), &ic(0.5, 20_000, 11, vec![0])).unwrap();
    assert!(
        (est.mean - exact).abs() <= 3.0 * est.std_error,
        "mean {} exact {} se {}",
        est.mean,
        exact,
        est.std_error
    );
}

#[test]
fn cascade_matches_enumeration_on_small_graphs() {
    let mut r = rng(3);
    let mut outside = Vec::new();
    for case in 0..60 {
        let n = r.gen_range(2..=8);
        let e = small_graph(&mut r, n, 10);
        let p = r.gen_range(0.05..0.95);
        let seeds = vec![r.gen_range(0..n)];
        let exact = cascade_oracle(&e, &seeds, p);
        let est = spread_estimate(&e.graph(Direction::InfoFlow), &ic(p, 4000, case, seeds)).unwrap();
        let tol = 3.0 * est.std_error;
        if (est.mean - exact).abs() > tol.max(1e-12) {
            outside.push((case, est.mean, exact, est.std_error));
        }
    }
    assert!(outside.is_empty(), "outside 3 SE: {outside:?}");
}

#[test]
fn monotone_under_nested_removal_exactly() {
    let mut r = rng(9);
    for _ in 0..200 {
        let n = r.gen_range(3..=8);
        let e = small_graph(&mut r, n, 10);
        let seed = r.gen_range(0..n);
        let mut others: Vec<usize> = (0..n).filter(|&v| v != seed).collect();
        others.shuffle(&mut r);
        let big: BTreeSet<usize> = others[..r.gen_range(1..others.len().max(2))].iter().copied().collect();
        let small: BTreeSet<usize> = big.iter().copied().take(big.len() / 2).collect();
        let p = r.gen_range(0.1..0.9);
        let v_small = cascade_oracle(&without(&e, &small), &[seed], p);
        let v_big = cascade_oracle(&without(&e, &big), &[seed], p);
        assert!(v_big <= v_small + 1e-12, "{v_big} > {v_small}");

        let g = e.graph(Direction::InfoFlow);
        let cfg = ic(p, 1000, 5, vec![seed]);
        let a = intervention_experiment(&g, &small.iter().copied().collect::<Vec<_>>(), &cfg).unwrap();
        let b = intervention_experiment(&g, &big.iter().copied().collect::<Vec<_>>(), &cfg).unwrap();
        // Paired coins make the Monte Carlo comparison exact as well.
        assert!(b.treated_volume <= a.treated_volume);
    }
}

#[test]
fn paired_trials_never_grow_after_removal() {
    // Removal leaves every surviving edge's coin unchanged, so each trial's
    // volume can only shrink.
    let mut r = rng(21);
    for _ in 0..20 {
        let e = random_digraph(&mut r, 40, 0.08, 1);
        let g = e.graph(Direction::InfoFlow);
        let cfg = ic(0.3, 500, 2, vec![0, 1]);
        let base = trial_volumes(&g, &cfg).unwrap().unwrap();
        let removed: Vec<usize> = (2..40).filter(|_| r.gen_bool(0.2)).collect();
        let res = intervention_experiment(&g, &removed, &cfg).unwrap();
        assert!(res.treated_volume <= res.baseline_volume);
        let mean = base.iter().map(|&v| f64::from(v)).sum::<f64>() / base.len() as f64;
        assert_eq!(mean, res.baseline_volume);
    }
}

#[test]
fn published_lists_give_29_node_removal_set() {
    let rankings = published::all_rankings();
    let distinct: BTreeSet<&str> = rankings.iter().flat_map(|t| t.nodes()).collect();
    let mut labels: Vec<String> = distinct.into_iter().map(str::to_owned).collect();
    labels.sort_by(|a, b| spreadrank::graph::label_cmp(a, b));
    let g = DirectedGraph::from_weighted_edges(labels, std::iter::empty(), Direction::InfoFlow).unwrap();
    let trad = metric_removal_set(&g, &rankings, &RemovalStrategy::TraditionalUnion, 10).unwrap();
    assert_eq!(trad.len(), 29);
    let combined = metric_removal_set(&g, &rankings, &RemovalStrategy::CombinedUnion, 10).unwrap();
    assert!(combined.is_superset(&trad));
    assert_eq!(combined.len(), 43);
    let traditional_only: Vec<RankingTable> =
        rankings.iter().filter(|t| TRADITIONAL.contains(&t.metric)).cloned().collect();
    assert!(metric_removal_set(&g, &traditional_only, &RemovalStrategy::Single { metric: Metric::Pc }, 10).is_err());
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let e = random_digraph(&mut rng(4), 60, 0.06, 3);
    let g = e.graph(Direction::InfoFlow);
    let cfg = CascadeConfig {
        model: CascadeModel::IndependentCascade {
            p: 0.2,
            trials: 2000,
            seed: 77,
            weighted: true,
        },
        seeds: vec![0, 5, 9],
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| intervention_experiment(&g, &[1, 2, 3, 30], &cfg).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(1));
}

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn certain_cascade_is_reachability(seed in any::<u64>(), n in 1usize..30, p in 0.0..0.3f64, k in 1usize..4) {
        let mut r = rng(seed);
        let e = random_digraph(&mut r, n, p, 1);
        let g = e.graph(Direction::InfoFlow);
        let seeds: Vec<usize> = (0..k).map(|_| r.gen_range(0..n)).collect();
        let want = reach_count(n, &e.edges.iter().map(|&(u, v, _)| (u, v)).collect::<Vec<_>>(), &seeds);
        prop_assert_eq!(spread_volume(&g, &reach(seeds.clone())).unwrap(), want as f64);
        let est = spread_estimate(&g, &ic(1.0, 50, seed, seeds)).unwrap();
        prop_assert_eq!(est.mean, want as f64);
        prop_assert_eq!(est.std_error, 0.0);
    }
}
