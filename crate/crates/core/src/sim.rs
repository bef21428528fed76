//! Spread models and node-removal experiments.
//!
//! Independent cascade is simulated in its live-edge form: in trial `t`,
//! edge `(u, v)` is live iff `U(seed, t, u, v) < p`, where `U` is a
//! counter-based uniform keyed by the nodes' ids in the *original* graph.
//! A treated graph (nodes removed) therefore sees exactly the same coin
//! flips on its surviving edges as the baseline, which pairs the two runs
//! and makes per-trial volumes monotone under removal.

use std::collections::{BTreeSet, HashSet};

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::Metric;
use crate::error::{Error, Result};
use crate::graph::{Direction, DirectedGraph, NodeId};
use crate::rank::RankingTable;
use crate::rng::{keyed_unit, stream_rng, substream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CascadeModel {
    IndependentCascade {
        p: f64,
        trials: usize,
        seed: u64,
        /// Per-edge probability `1 - (1-p)^w` instead of `p`.
        #[serde(default)]
        weighted: bool,
    },
    Reachability,
}

impl CascadeModel {
    pub fn validate(&self) -> Result<()> {
        if let CascadeModel::IndependentCascade { p, trials, .. } = *self {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::invalid(format!("cascade probability {p} not in (0,1]")));
            }
            if trials == 0 {
                return Err(Error::invalid("cascade trials must be at least 1"));
            }
        }
        Ok(())
    }

    fn trials(&self) -> Option<usize> {
        match self {
            CascadeModel::IndependentCascade { trials, .. } => Some(*trials),
            CascadeModel::Reachability => None,
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            CascadeModel::IndependentCascade { seed, .. } => Some(*seed),
            CascadeModel::Reachability => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeConfig {
    pub model: CascadeModel,
    /// Misinformation originators.
    pub seeds: Vec<NodeId>,
}

/// Monte Carlo mean with its standard error (0 for deterministic models).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpreadEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// Expected number of activated nodes (seeds included).
pub fn spread_volume(g: &DirectedGraph, cfg: &CascadeConfig) -> Result<f64> {
    spread_estimate(g, cfg).map(|e| e.mean)
}

pub fn spread_estimate(g: &DirectedGraph, cfg: &CascadeConfig) -> Result<SpreadEstimate> {
    let keys: Vec<u64> = (0..g.node_count() as u64).collect();
    spread_keyed(g, cfg, &keys)
}

/// Per-trial volumes of an independent cascade; `None` for reachability.
pub fn trial_volumes(g: &DirectedGraph, cfg: &CascadeConfig) -> Result<Option<Vec<u32>>> {
    let keys: Vec<u64> = (0..g.node_count() as u64).collect();
    check_config(g, cfg)?;
    let view = g.oriented(Direction::InfoFlow);
    Ok(match cfg.model {
        CascadeModel::Reachability => None,
        CascadeModel::IndependentCascade { p, trials, seed, weighted } => {
            Some(run_trials(&view, &cfg.seeds, p, weighted, trials, seed, &keys))
        }
    })
}

fn check_config(g: &DirectedGraph, cfg: &CascadeConfig) -> Result<()> {
    cfg.model.validate()?;
    if cfg.seeds.is_empty() {
        return Err(Error::invalid("cascade needs at least one seed"));
    }
    if let Some(&bad) = cfg.seeds.iter().find(|&&s| s >= g.node_count()) {
        return Err(Error::InvalidNode(bad));
    }
    Ok(())
}

fn spread_keyed(g: &DirectedGraph, cfg: &CascadeConfig, keys: &[u64]) -> Result<SpreadEstimate> {
    check_config(g, cfg)?;
    let view = g.oriented(Direction::InfoFlow);
    match cfg.model {
        CascadeModel::Reachability => {
            let mut seen = vec![false; view.node_count()];
            let reached = flood(&view, &cfg.seeds, &mut seen, &mut Vec::new(), |_, _, _| true);
            Ok(SpreadEstimate {
                mean: reached as f64,
                std_error: 0.0,
                trials: 1,
            })
        }
        CascadeModel::IndependentCascade { p, trials, seed, weighted } => {
            let volumes = run_trials(&view, &cfg.seeds, p, weighted, trials, seed, keys);
            Ok(summarise(&volumes))
        }
    }
}

fn summarise(volumes: &[u32]) -> SpreadEstimate {
    let n = volumes.len() as f64;
    let mean = volumes.iter().map(|&v| f64::from(v)).sum::<f64>() / n;
    let var = if volumes.len() > 1 {
        volumes.iter().map(|&v| (f64::from(v) - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    SpreadEstimate {
        mean,
        std_error: (var / n).sqrt(),
        trials: volumes.len(),
    }
}

fn run_trials(
    g: &DirectedGraph,
    seeds: &[NodeId],
    p: f64,
    weighted: bool,
    trials: usize,
    seed: u64,
    keys: &[u64],
) -> Vec<u32> {
    let stream = substream(seed, "cascade");
    let n = g.node_count();
    (0..trials as u64)
        .into_par_iter()
        .map_init(
            || (vec![false; n], Vec::new()),
            |(seen, touched), trial| {
                let live = |u: NodeId, v: NodeId, w: f64| {
                    let prob = if weighted { 1.0 - (1.0 - p).powf(w) } else { p };
                    prob >= 1.0 || keyed_unit(stream, trial, keys[u], keys[v]) < prob
                };
                let count = flood(g, seeds, seen, touched, live);
                for &v in touched.iter() {
                    seen[v] = false;
                }
                count as u32
            },
        )
        .collect()
}

/// Breadth-first activation over edges accepted by `live`. Leaves every
/// activated node marked in `seen` and listed in `touched`.
fn flood(
    g: &DirectedGraph,
    seeds: &[NodeId],
    seen: &mut [bool],
    touched: &mut Vec<NodeId>,
    live: impl Fn(NodeId, NodeId, f64) -> bool,
) -> usize {
    touched.clear();
    for &s in seeds {
        if !seen[s] {
            seen[s] = true;
            touched.push(s);
        }
    }
    let mut head = 0;
    while head < touched.len() {
        let u = touched[head];
        head += 1;
        for (&v, &w) in g.out_neighbors(u).iter().zip(g.out_weights(u)) {
            if !seen[v] && live(u, v, w) {
                seen[v] = true;
                touched.push(v);
            }
        }
    }
    touched.len()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterventionResult {
    pub model: CascadeModel,
    pub seeds: Vec<String>,
    pub removed: Vec<String>,
    pub baseline_volume: f64,
    pub treated_volume: f64,
    pub baseline_std_error: f64,
    pub treated_std_error: f64,
    pub reduction_pct: f64,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

/// Baseline spread on `g` versus spread after removing `removal`. Removed
/// seeds count as neutralised and leave the seed set.
pub fn intervention_experiment(g: &DirectedGraph, removal: &[NodeId], cfg: &CascadeConfig) -> Result<InterventionResult> {
    let n = g.node_count();
    let identity: Vec<u64> = (0..n as u64).collect();
    let baseline = spread_keyed(g, cfg, &identity)?;
    if !(baseline.mean > 0.0) {
        return Err(Error::DegenerateBaseline);
    }

    let mut removal: Vec<NodeId> = removal.to_vec();
    removal.sort_unstable();
    removal.dedup();
    let (treated_graph, map) = g.remove_nodes(&removal)?;
    let surviving: Vec<NodeId> = cfg.seeds.iter().filter_map(|&s| map[s]).collect();
    let treated = if surviving.is_empty() {
        SpreadEstimate {
            mean: 0.0,
            std_error: 0.0,
            trials: cfg.model.trials().unwrap_or(1),
        }
    } else {
        let mut keys = vec![0u64; treated_graph.node_count()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = new {
                keys[*new] = old as u64;
            }
        }
        let treated_cfg = CascadeConfig {
            model: cfg.model,
            seeds: surviving,
        };
        spread_keyed(&treated_graph, &treated_cfg, &keys)?
    };

    let mut seeds: Vec<NodeId> = cfg.seeds.clone();
    seeds.sort_unstable();
    seeds.dedup();
    Ok(InterventionResult {
        model: cfg.model,
        seeds: seeds.iter().map(|&s| g.label(s).to_owned()).collect(),
        removed: removal.iter().map(|&v| g.label(v).to_owned()).collect(),
        baseline_volume: baseline.mean,
        treated_volume: treated.mean,
        baseline_std_error: baseline.std_error,
        treated_std_error: treated.std_error,
        reduction_pct: 100.0 * (baseline.mean - treated.mean) / baseline.mean,
        trials: cfg.model.trials(),
        seed: cfg.model.seed(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "strategy")]
pub enum RemovalStrategy {
    /// Union of the traditional metrics' lists.
    TraditionalUnion,
    /// Union of every supplied list.
    CombinedUnion,
    Single { metric: Metric },
    /// `k` nodes drawn uniformly without replacement.
    Random { k: usize, seed: u64 },
}

impl RemovalStrategy {
    pub fn name(&self) -> String {
        match self {
            RemovalStrategy::TraditionalUnion => "traditional_union".into(),
            RemovalStrategy::CombinedUnion => "combined_union".into(),
            RemovalStrategy::Single { metric } => format!("single:{metric}"),
            RemovalStrategy::Random { .. } => "random".into(),
        }
    }
}

fn pick_rankings<'a>(rankings: &'a [RankingTable], strategy: &RemovalStrategy) -> Result<Vec<&'a RankingTable>> {
    let chosen: Vec<&RankingTable> = match strategy {
        RemovalStrategy::TraditionalUnion => rankings.iter().filter(|r| r.metric.is_traditional()).collect(),
        RemovalStrategy::CombinedUnion => rankings.iter().collect(),
        RemovalStrategy::Single { metric } => rankings.iter().filter(|r| r.metric == *metric).collect(),
        RemovalStrategy::Random { .. } => Vec::new(),
    };
    if chosen.is_empty() && !matches!(strategy, RemovalStrategy::Random { .. }) {
        return Err(Error::invalid(format!("no ranking available for strategy {}", strategy.name())));
    }
    Ok(chosen)
}

/// Candidates in removal priority: round-robin over the selected rankings
/// (every list's rank 1, then every list's rank 2, ...), duplicates skipped.
/// The first `|union of top-k|` entries are exactly that union, so deeper
/// rankings extend the order for equal-budget padding.
pub fn removal_order(g: &DirectedGraph, rankings: &[RankingTable], strategy: &RemovalStrategy) -> Result<Vec<NodeId>> {
    if let RemovalStrategy::Random { k, seed } = *strategy {
        let n = g.node_count();
        if k > n {
            return Err(Error::invalid(format!("cannot draw {k} of {n} nodes")));
        }
        let mut rng = stream_rng(seed, "removal");
        return Ok(sample(&mut rng, n, k).into_vec());
    }
    let chosen = pick_rankings(rankings, strategy)?;
    let index = g.label_index();
    let depth = chosen.iter().map(|r| r.entries.len()).max().unwrap_or(0);
    let mut seen = HashSet::new();
    let mut order = Vec::new();
    for rank in 0..depth {
        for r in &chosen {
            if let Some(e) = r.entries.get(rank) {
                let id = *index.get(e.node.as_str()).ok_or_else(|| Error::UnknownLabel(e.node.clone()))?;
                if seen.insert(id) {
                    order.push(id);
                }
            }
        }
    }
    Ok(order)
}

/// Union of the top-`k` entries of the selected rankings (or a random draw).
pub fn metric_removal_set(
    g: &DirectedGraph,
    rankings: &[RankingTable],
    strategy: &RemovalStrategy,
    k: usize,
) -> Result<BTreeSet<NodeId>> {
    if let RemovalStrategy::Random { .. } = strategy {
        return Ok(removal_order(g, rankings, strategy)?.into_iter().collect());
    }
    let truncated: Vec<RankingTable> = pick_rankings(rankings, strategy)?
        .into_iter()
        .map(|r| RankingTable {
            metric: r.metric,
            k,
            entries: r.entries.iter().take(k).cloned().collect(),
        })
        .collect();
    Ok(removal_order(g, &truncated, &RemovalStrategy::CombinedUnion)?.into_iter().collect())
}

/// First `budget` entries of a removal order (shorter if the order runs out).
pub fn equal_budget(order: &[NodeId], budget: usize) -> Vec<NodeId> {
    order.iter().take(budget).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> DirectedGraph {
        let labels = (0..n).map(|i| i.to_string()).collect();
        DirectedGraph::from_weighted_edges(labels, edges.iter().map(|&(u, v)| (u, v, 1.0)), Direction::InfoFlow)
            .unwrap()
    }

    fn reach(seeds: &[usize]) -> CascadeConfig {
        CascadeConfig {
            model: CascadeModel::Reachability,
            seeds: seeds.to_vec(),
        }
    }

    fn ic(p: f64, trials: usize, seeds: &[usize]) -> CascadeConfig {
        CascadeConfig {
            model: CascadeModel::IndependentCascade {
                p,
                trials,
                seed: 5,
                weighted: false,
            },
            seeds: seeds.to_vec(),
        }
    }

    #[test]
    fn reachability_on_path() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(spread_volume(&g, &reach(&[0])).unwrap(), 3.0);
        assert_eq!(spread_volume(&g, &reach(&[2])).unwrap(), 1.0);
        assert!(spread_volume(&g, &reach(&[])).is_err());
        assert!(matches!(spread_volume(&g, &reach(&[3])), Err(Error::InvalidNode(3))));
    }

    #[test]
    fn certain_cascade_equals_reachability() {
        let g = graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5)]);
        for seeds in [vec![0], vec![3], vec![1, 4], vec![5]] {
            let r = spread_volume(&g, &reach(&seeds)).unwrap();
            let c = spread_estimate(&g, &ic(1.0, 20, &seeds)).unwrap();
            assert_eq!(c.mean, r);
            assert_eq!(c.std_error, 0.0);
        }
    }

    #[test]
    fn path_intervention() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let r = intervention_experiment(&g, &[1], &reach(&[0])).unwrap();
        assert_eq!(r.baseline_volume, 3.0);
        assert_eq!(r.treated_volume, 1.0);
        assert!((r.reduction_pct - 200.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.removed, vec!["1"]);

        let none = intervention_experiment(&g, &[], &reach(&[0])).unwrap();
        assert_eq!(none.reduction_pct, 0.0);
    }

    #[test]
    fn removing_seed_hub_neutralises_it() {
        let edges: Vec<_> = (1..10).map(|i| (0, i)).collect();
        let g = graph(10, &edges);
        let r = intervention_experiment(&g, &[0], &reach(&[0])).unwrap();
        assert_eq!(r.baseline_volume, 10.0);
        assert_eq!(r.treated_volume, 0.0);
        assert_eq!(r.reduction_pct, 100.0);
    }

    #[test]
    fn removal_never_increases_paired_volume() {
        let edges: Vec<_> = (0..60).map(|i| ((i * 7) % 25, (i * 11 + 3) % 25)).collect();
        let g = graph(25, &edges);
        let cfg = ic(0.4, 300, &[0, 1]);
        let small = intervention_experiment(&g, &[10], &cfg).unwrap();
        let large = intervention_experiment(&g, &[10, 14, 20], &cfg).unwrap();
        assert_eq!(small.baseline_volume, large.baseline_volume);
        assert!(large.treated_volume <= small.treated_volume);
        assert!(small.treated_volume <= small.baseline_volume);
    }

    #[test]
    fn weighted_probability_grows_with_weight() {
        let labels = vec!["a".to_string(), "b".into()];
        let heavy = DirectedGraph::from_weighted_edges(labels.clone(), [(0, 1, 5.0)], Direction::InfoFlow).unwrap();
        let light = DirectedGraph::from_weighted_edges(labels, [(0, 1, 1.0)], Direction::InfoFlow).unwrap();
        let mk = |weighted| CascadeConfig {
            model: CascadeModel::IndependentCascade {
                p: 0.2,
                trials: 4000,
                seed: 1,
                weighted,
            },
            seeds: vec![0],
        };
        let h = spread_volume(&heavy, &mk(true)).unwrap();
        let l = spread_volume(&light, &mk(true)).unwrap();
        // 1 + (1 - 0.8^5) ≈ 1.672 versus 1.2.
        assert!((h - 1.672).abs() < 0.03, "{h}");
        assert!((l - 1.2).abs() < 0.03, "{l}");
    }

    #[test]
    fn strategies() {
        let g = graph(6, &[(0, 1)]);
        let rankings = vec![
            RankingTable::from_ordered(Metric::DegreeTotal, &["0", "1", "2"]),
            RankingTable::from_ordered(Metric::Closeness, &["3", "0", "4"]),
            RankingTable::from_ordered(Metric::Pc, &["5", "0", "1"]),
        ];
        let trad = metric_removal_set(&g, &rankings, &RemovalStrategy::TraditionalUnion, 2).unwrap();
        assert_eq!(trad, BTreeSet::from([0, 1, 3]));
        let all = metric_removal_set(&g, &rankings, &RemovalStrategy::CombinedUnion, 2).unwrap();
        assert!(all.is_superset(&trad));
        assert_eq!(all.len(), 4);

        let order = removal_order(&g, &rankings, &RemovalStrategy::CombinedUnion).unwrap();
        assert_eq!(order, vec![0, 3, 5, 1, 2, 4]);
        assert_eq!(equal_budget(&order, 3), vec![0, 3, 5]);

        let single = metric_removal_set(&g, &rankings, &RemovalStrategy::Single { metric: Metric::Pc }, 1).unwrap();
        assert_eq!(single, BTreeSet::from([5]));
        let missing = metric_removal_set(&g, &rankings, &RemovalStrategy::Single { metric: Metric::Dic }, 1);
        assert!(missing.is_err());

        let r = RemovalStrategy::Random { k: 3, seed: 4 };
        let a = metric_removal_set(&g, &rankings, &r, 3).unwrap();
        assert_eq!(a, metric_removal_set(&g, &rankings, &r, 3).unwrap());
        assert_eq!(a.len(), 3);
    }
}
