//! Top-k tables, Venn partitions across metric rankings, and proxy rank
//! correlation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::centrality::{Metric, NodeAttributes, Proxy, ScoreVector};
use crate::error::{Error, Result};
use crate::graph::label_cmp;

pub const DEFAULT_K: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub rank: usize,
    pub node: String,
    pub score: f64,
}

/// Descending score, ties by ascending label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingTable {
    pub metric: Metric,
    pub k: usize,
    pub entries: Vec<RankEntry>,
}

impl RankingTable {
    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.node.as_str())
    }

    /// Builds a table straight from an already-ordered node list, assigning
    /// descending synthetic scores. Useful for externally published lists.
    pub fn from_ordered(metric: Metric, nodes: &[&str]) -> Self {
        let k = nodes.len();
        RankingTable {
            metric,
            k,
            entries: nodes
                .iter()
                .enumerate()
                .map(|(i, n)| RankEntry {
                    rank: i + 1,
                    node: (*n).to_owned(),
                    score: (k - i) as f64,
                })
                .collect(),
        }
    }
}

fn score_order(scores: &[f64], labels: &[String], a: usize, b: usize) -> Ordering {
    scores[b]
        .total_cmp(&scores[a])
        .then_with(|| label_cmp(&labels[a], &labels[b]))
}

/// Node ids ordered by descending score, ties by ascending label.
pub fn ranked_ids(sv: &ScoreVector) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..sv.len()).collect();
    ids.sort_unstable_by(|&a, &b| score_order(&sv.scores, &sv.labels, a, b));
    ids
}

pub fn top_k(sv: &ScoreVector, k: usize) -> Result<RankingTable> {
    if k < 1 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let take = k.min(sv.len());
    let mut ids: Vec<usize> = (0..sv.len()).collect();
    let cmp = |&a: &usize, &b: &usize| score_order(&sv.scores, &sv.labels, a, b);
    if take < ids.len() {
        ids.select_nth_unstable_by(take, cmp);
        ids.truncate(take);
    }
    ids.sort_unstable_by(cmp);
    Ok(RankingTable {
        metric: sv.metric,
        k,
        entries: ids
            .into_iter()
            .enumerate()
            .map(|(i, v)| RankEntry {
                rank: i + 1,
                node: sv.labels[v].clone(),
                score: sv.scores[v],
            })
            .collect(),
    })
}

/// One cell of the Venn partition: nodes in exactly these metrics' lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub metrics: Vec<Metric>,
    pub nodes: Vec<String>,
    pub count: usize,
}

impl Region {
    /// `Degree&Eigenvector&Betweenness`-style label.
    pub fn label(&self) -> String {
        self.metrics.iter().map(|m| m.display_name()).collect::<Vec<_>>().join("&")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub metrics: Vec<Metric>,
    pub regions: Vec<Region>,
    pub union_traditional: Vec<String>,
    pub union_all: Vec<String>,
    pub coverage_gain_pct: f64,
}

impl OverlapReport {
    pub fn region(&self, metrics: &[Metric]) -> Option<&Region> {
        let want: BTreeSet<Metric> = metrics.iter().copied().collect();
        self.regions
            .iter()
            .find(|r| r.metrics.iter().copied().collect::<BTreeSet<_>>() == want)
    }
}

fn sorted_labels<'a>(it: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    let mut v: Vec<String> = it.into_iter().map(str::to_owned).collect();
    v.sort_by(|a, b| label_cmp(a, b));
    v.dedup();
    v
}

/// Percentage growth from the traditional union to the full union.
pub fn coverage_gain_pct(traditional: usize, all: usize) -> Result<f64> {
    if traditional == 0 {
        return Err(Error::DegenerateBaseline);
    }
    Ok(100.0 * (all as f64 - traditional as f64) / traditional as f64)
}

/// Exact Venn partition of the rankings' node sets.
///
/// Regions are listed by descending number of member metrics, then by the
/// position of their metrics in `rankings`. Node lists are sorted ascending.
pub fn overlap_report(rankings: &[RankingTable], traditional: &[Metric]) -> Result<OverlapReport> {
    if rankings.len() < 2 {
        return Err(Error::invalid("overlap needs at least two rankings"));
    }
    if rankings.len() > 64 {
        return Err(Error::invalid("overlap supports at most 64 rankings"));
    }
    let metrics: Vec<Metric> = rankings.iter().map(|r| r.metric).collect();
    if metrics.iter().collect::<BTreeSet<_>>().len() != metrics.len() {
        return Err(Error::invalid("duplicate metric in rankings"));
    }
    for t in traditional {
        if !metrics.contains(t) {
            return Err(Error::invalid(format!("traditional metric `{t}` has no ranking")));
        }
    }

    // Membership signature per node: bit i set when ranking i lists it.
    let mut membership: BTreeMap<&str, u64> = BTreeMap::new();
    for (i, r) in rankings.iter().enumerate() {
        for node in r.nodes() {
            *membership.entry(node).or_insert(0) |= 1 << i;
        }
    }
    let mut cells: BTreeMap<u64, Vec<&str>> = BTreeMap::new();
    for (node, sig) in &membership {
        cells.entry(*sig).or_default().push(node);
    }
    let mut regions: Vec<(u64, Region)> = cells
        .into_iter()
        .map(|(sig, nodes)| {
            let members = (0..rankings.len()).filter(|i| sig & (1 << i) != 0).map(|i| metrics[i]).collect();
            let nodes = sorted_labels(nodes);
            (
                sig,
                Region {
                    metrics: members,
                    count: nodes.len(),
                    nodes,
                },
            )
        })
        .collect();
    regions.sort_by(|(sa, a), (sb, b)| {
        b.metrics
            .len()
            .cmp(&a.metrics.len())
            .then_with(|| sa.reverse_bits().cmp(&sb.reverse_bits()).reverse())
    });

    let trad_mask: u64 = rankings
        .iter()
        .enumerate()
        .filter(|(_, r)| traditional.contains(&r.metric))
        .fold(0, |m, (i, _)| m | 1 << i);
    let union_traditional = sorted_labels(membership.iter().filter(|(_, s)| *s & trad_mask != 0).map(|(n, _)| *n));
    let union_all = sorted_labels(membership.keys().copied());
    let coverage_gain_pct = coverage_gain_pct(union_traditional.len(), union_all.len())?;

    Ok(OverlapReport {
        metrics,
        regions: regions.into_iter().map(|(_, r)| r).collect(),
        union_traditional,
        union_all,
        coverage_gain_pct,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub metric: Metric,
    pub proxy: Proxy,
    pub rho: f64,
    pub n_effective: usize,
}

/// Average ranks (1-based); tied values share the mean of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman's rho with average-rank tie handling, computed as the Pearson
/// correlation of the rank vectors.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    assert_eq!(x.len(), y.len());
    if x.len() < 3 {
        return Err(Error::InsufficientData { found: x.len() });
    }
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let mean = (x.len() as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        let (da, db) = (a - mean, b - mean);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

pub fn rank_correlation(sv: &ScoreVector, attrs: &NodeAttributes, proxy: Proxy) -> Result<CorrelationResult> {
    let column = attrs.get(proxy);
    let (xs, ys): (Vec<f64>, Vec<f64>) = sv
        .scores
        .iter()
        .zip(column)
        .filter_map(|(&s, a)| a.map(|a| (s, a)))
        .unzip();
    let rho = spearman(&xs, &ys)?;
    Ok(CorrelationResult {
        metric: sv.metric,
        proxy,
        rho,
        n_effective: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn sv(metric: Metric, pairs: &[(&str, f64)]) -> ScoreVector {
        let labels: Arc<[String]> = pairs.iter().map(|(l, _)| l.to_string()).collect();
        ScoreVector::new(metric, labels, pairs.iter().map(|p| p.1).collect())
    }

    #[test]
    fn ties_break_by_label() {
        let s = sv(Metric::Pc, &[("C", 1.0), ("B", 3.0), ("A", 3.0)]);
        let t = top_k(&s, 2).unwrap();
        assert_eq!(t.nodes().collect::<Vec<_>>(), vec!["A", "B"]);
        assert_eq!(t.entries[0].rank, 1);
        let all = top_k(&s, 10).unwrap();
        assert_eq!(all.nodes().collect::<Vec<_>>(), vec!["A", "B", "C"]);
        assert!(top_k(&s, 0).is_err());
    }

    #[test]
    fn identical_rankings_share_one_region() {
        let a = RankingTable::from_ordered(Metric::DegreeTotal, &["1", "2", "3"]);
        let mut b = a.clone();
        b.metric = Metric::Pc;
        let r = overlap_report(&[a, b], &[Metric::DegreeTotal]).unwrap();
        assert_eq!(r.regions.len(), 1);
        assert_eq!(r.regions[0].count, 3);
        assert_eq!(r.coverage_gain_pct, 0.0);
    }

    #[test]
    fn overlap_errors() {
        let a = RankingTable::from_ordered(Metric::Pc, &["1"]);
        let b = RankingTable::from_ordered(Metric::Dic, &["2"]);
        assert!(matches!(overlap_report(&[a.clone(), b.clone()], &[]), Err(Error::DegenerateBaseline)));
        assert!(overlap_report(&[a.clone()], &[]).is_err());
        assert!(overlap_report(&[a, b], &[Metric::Closeness]).is_err());
    }

    #[test]
    fn regions_ordered_by_size_then_metric_position() {
        let a = RankingTable::from_ordered(Metric::DegreeTotal, &["1", "2", "4"]);
        let b = RankingTable::from_ordered(Metric::Eigenvector, &["1", "3", "4"]);
        let c = RankingTable::from_ordered(Metric::Closeness, &["1", "5"]);
        let r = overlap_report(&[a, b, c], &[Metric::DegreeTotal]).unwrap();
        let labels: Vec<String> = r.regions.iter().map(Region::label).collect();
        assert_eq!(
            labels,
            vec!["Degree&Eigenvector&Closeness", "Degree&Eigenvector", "Degree", "Eigenvector", "Closeness"]
        );
    }

    #[test]
    fn spearman_extremes() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((spearman(&x, &[10.0, 20.0, 30.0, 40.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((spearman(&x, &[4.0, 3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        assert!(matches!(spearman(&x, &[1.0; 4]), Err(Error::UndefinedCorrelation)));
        assert!(matches!(spearman(&x[..2], &x[..2]), Err(Error::InsufficientData { found: 2 })));
    }

    #[test]
    fn average_ranks_with_ties() {
        assert_eq!(average_ranks(&[10.0, 20.0, 20.0, 5.0]), vec![2.0, 3.5, 3.5, 1.0]);
    }

    #[test]
    fn correlation_skips_nodes_without_attribute() {
        let s = sv(Metric::Pc, &[("a", 0.4), ("b", 0.3), ("c", 0.2), ("d", 0.1)]);
        let mut attrs = NodeAttributes::empty(4);
        attrs.retweet_count = vec![Some(9.0), None, Some(5.0), Some(1.0)];
        let r = rank_correlation(&s, &attrs, Proxy::RetweetCount).unwrap();
        assert_eq!(r.n_effective, 3);
        assert!((r.rho - 1.0).abs() < 1e-15);
    }
}
