//! Immutable weighted directed graph in compressed sparse row form.
//!
//! Both orientations are stored: `out_*` arrays hold successors, `in_*`
//! arrays hold predecessors. Parallel interactions are folded into one edge
//! whose weight is the summed record weight; self-loops are dropped and
//! counted.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense node index in `0..n`.
pub type NodeId = usize;

/// Orientation convention of stored edges.
///
/// `InfoFlow` points author → resharer (the way content travels);
/// `Endorsement` points resharer → author (the way credit accrues).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    #[default]
    InfoFlow,
    Endorsement,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::InfoFlow => Direction::Endorsement,
            Direction::Endorsement => Direction::InfoFlow,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::InfoFlow => "info-flow",
            Direction::Endorsement => "endorsement",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "info-flow" | "infoflow" => Ok(Direction::InfoFlow),
            "endorsement" => Ok(Direction::Endorsement),
            other => Err(Error::invalid(format!("unknown direction `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeMode {
    In,
    Out,
    Total,
}

impl FromStr for DegreeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "in" | "in_degree" | "in-degree" => Ok(DegreeMode::In),
            "out" | "out_degree" | "out-degree" => Ok(DegreeMode::Out),
            "total" | "total_degree" | "total-degree" => Ok(DegreeMode::Total),
            other => Err(Error::invalid(format!("unknown degree mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum InteractionKind {
    Retweet,
    Mention,
    Reply,
    Share,
    #[default]
    Other,
}

impl InteractionKind {
    /// Unrecognised kinds map to `Other`; the kind never affects edges.
    pub fn parse_lenient(s: &str) -> Self {
        match s.trim().to_ascii_lowercase().as_str() {
            "retweet" | "rt" => InteractionKind::Retweet,
            "mention" => InteractionKind::Mention,
            "reply" => InteractionKind::Reply,
            "share" => InteractionKind::Share,
            _ => InteractionKind::Other,
        }
    }
}

/// One observed interaction: `actor` reshared, mentioned or replied to `target`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionRecord {
    pub actor: String,
    pub target: String,
    #[serde(default)]
    pub kind: InteractionKind,
    #[serde(default)]
    pub timestamp: Option<i64>,
    #[serde(default)]
    pub weight: Option<f64>,
}

impl InteractionRecord {
    pub fn new(actor: impl Into<String>, target: impl Into<String>, kind: InteractionKind) -> Self {
        InteractionRecord {
            actor: actor.into(),
            target: target.into(),
            kind,
            timestamp: None,
            weight: None,
        }
    }
}

/// Orders labels numerically when both parse as unsigned integers, otherwise
/// lexicographically. Numeric labels sort before non-numeric ones.
pub fn label_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    labels: Arc<[String]>,
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    out_weights: Vec<f64>,
    in_offsets: Vec<usize>,
    in_sources: Vec<NodeId>,
    in_weights: Vec<f64>,
    convention: Direction,
    dropped_self_loops: usize,
}

impl DirectedGraph {
    /// Builds a graph over `labels` (id `i` is `labels[i]`) from raw weighted
    /// edges. Duplicate pairs are summed, self-loops dropped.
    ///
    /// Labels must be unique. Ids are taken as given; use [`build_graph`] for
    /// sorted-label id assignment.
    pub fn from_weighted_edges<I>(labels: Vec<String>, edges: I, convention: Direction) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let n = labels.len();
        let mut agg: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
        let mut loops = 0usize;
        for (u, v, w) in edges {
            if u >= n {
                return Err(Error::InvalidNode(u));
            }
            if v >= n {
                return Err(Error::InvalidNode(v));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::invalid(format!("edge ({u},{v}) has non-positive weight {w}")));
            }
            if u == v {
                loops += 1;
                continue;
            }
            *agg.entry((u, v)).or_insert(0.0) += w;
        }
        let mut g = Self::from_sorted_unique(labels.into(), agg.into_iter().map(|((u, v), w)| (u, v, w)), convention);
        g.dropped_self_loops = loops;
        Ok(g)
    }

    /// Edges must be sorted by `(src, dst)`, unique, loop-free, positive.
    fn from_sorted_unique<I>(labels: Arc<[String]>, edges: I, convention: Direction) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let n = labels.len();
        let mut out_offsets = vec![0usize; n + 1];
        let mut out_targets = Vec::new();
        let mut out_weights = Vec::new();
        for (u, v, w) in edges {
            out_offsets[u + 1] += 1;
            out_targets.push(v);
            out_weights.push(w);
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
        }

        let m = out_targets.len();
        let mut in_offsets = vec![0usize; n + 1];
        for &v in &out_targets {
            in_offsets[v + 1] += 1;
        }
        for i in 0..n {
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut cursor = in_offsets.clone();
        let mut in_sources = vec![0; m];
        let mut in_weights = vec![0.0; m];
        // Walking sources in ascending order keeps each in-list sorted.
        for u in 0..n {
            for e in out_offsets[u]..out_offsets[u + 1] {
                let v = out_targets[e];
                let slot = cursor[v];
                in_sources[slot] = u;
                in_weights[slot] = out_weights[e];
                cursor[v] += 1;
            }
        }

        DirectedGraph {
            labels,
            out_offsets,
            out_targets,
            out_weights,
            in_offsets,
            in_sources,
            in_weights,
            convention,
            dropped_self_loops: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn convention(&self) -> Direction {
        self.convention
    }

    pub fn dropped_self_loops(&self) -> usize {
        self.dropped_self_loops
    }

    pub fn labels(&self) -> &Arc<[String]> {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    /// Linear-time lookup table from label to id.
    pub fn label_index(&self) -> HashMap<&str, NodeId> {
        self.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        // Labels are in sorted-label order whenever the graph came from
        // `build_graph`, but generated graphs need not be; fall back to a scan.
        match self.labels.binary_search_by(|l| label_cmp(l, label)) {
            Ok(i) => Some(i),
            Err(_) => self.labels.iter().position(|l| l == label),
        }
    }

    #[inline]
    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    #[inline]
    pub fn out_weights(&self, v: NodeId) -> &[f64] {
        &self.out_weights[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    #[inline]
    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    #[inline]
    pub fn in_weights(&self, v: NodeId) -> &[f64] {
        &self.in_weights[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    #[inline]
    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    #[inline]
    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    pub fn out_strength(&self, v: NodeId) -> f64 {
        self.out_weights(v).iter().sum()
    }

    /// Weight of edge `(u, v)`, if present.
    pub fn edge_weight(&self, u: NodeId, v: NodeId) -> Option<f64> {
        let targets = self.out_neighbors(u);
        targets.binary_search(&v).ok().map(|i| self.out_weights(u)[i])
    }

    /// All edges as `(src, dst, weight)`, sorted by `(src, dst)`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.out_neighbors(u)
                .iter()
                .zip(self.out_weights(u))
                .map(move |(&v, &w)| (u, v, w))
        })
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::InvalidNode(v))
        }
    }

    /// Reverses every edge; the recorded convention flips with it.
    pub fn transpose(&self) -> DirectedGraph {
        DirectedGraph {
            labels: Arc::clone(&self.labels),
            out_offsets: self.in_offsets.clone(),
            out_targets: self.in_sources.clone(),
            out_weights: self.in_weights.clone(),
            in_offsets: self.out_offsets.clone(),
            in_sources: self.out_targets.clone(),
            in_weights: self.out_weights.clone(),
            convention: self.convention.reversed(),
            dropped_self_loops: self.dropped_self_loops,
        }
    }

    /// The graph in the requested orientation, transposing only if needed.
    pub fn oriented(&self, want: Direction) -> std::borrow::Cow<'_, DirectedGraph> {
        if self.convention == want {
            std::borrow::Cow::Borrowed(self)
        } else {
            std::borrow::Cow::Owned(self.transpose())
        }
    }

    /// Drops `victims` and every incident edge. Returns the reduced graph and
    /// the old → new id map (`None` for removed nodes). Surviving nodes keep
    /// their relative order.
    pub fn remove_nodes(&self, victims: &[NodeId]) -> Result<(DirectedGraph, Vec<Option<NodeId>>)> {
        let n = self.node_count();
        let mut gone = vec![false; n];
        for &v in victims {
            self.check_node(v)?;
            gone[v] = true;
        }
        let mut map = vec![None; n];
        let mut labels = Vec::with_capacity(n);
        for v in 0..n {
            if !gone[v] {
                map[v] = Some(labels.len());
                labels.push(self.labels[v].clone());
            }
        }
        let edges = self
            .edges()
            .filter_map(|(u, v, w)| Some((map[u]?, map[v]?, w)))
            .collect::<Vec<_>>();
        let mut g = Self::from_sorted_unique(labels.into(), edges, self.convention);
        g.dropped_self_loops = self.dropped_self_loops;
        Ok((g, map))
    }

    /// Number of distinct neighbours in the given mode; weights are ignored.
    pub fn degree(&self, v: NodeId, mode: DegreeMode) -> Result<usize> {
        self.check_node(v)?;
        Ok(match mode {
            DegreeMode::In => self.in_degree(v),
            DegreeMode::Out => self.out_degree(v),
            DegreeMode::Total => self.in_degree(v) + self.out_degree(v),
        })
    }

    /// Kosaraju over both CSR orientations; iterative so deep graphs are fine.
    pub fn is_strongly_connected(&self) -> bool {
        let n = self.node_count();
        if n <= 1 {
            return true;
        }
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            let mut count = 1;
            while let Some(u) = stack.pop() {
                let next = if forward { self.out_neighbors(u) } else { self.in_neighbors(u) };
                for &w in next {
                    if !seen[w] {
                        seen[w] = true;
                        count += 1;
                        stack.push(w);
                    }
                }
            }
            count
        };
        reach(true) == n && reach(false) == n
    }

    /// Strongly connected components in topological order of the
    /// condensation (a component comes before every component it reaches).
    /// Members are listed in breadth-first order along in-edges from the
    /// component's root. Kosaraju, iterative.
    pub fn strongly_connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut finished = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        let mut stack: Vec<(NodeId, usize)> = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            stack.push((root, 0));
            while let Some((u, i)) = stack.last_mut() {
                let u = *u;
                if let Some(&w) = self.out_neighbors(u).get(*i) {
                    *i += 1;
                    if !seen[w] {
                        seen[w] = true;
                        stack.push((w, 0));
                    }
                } else {
                    finished.push(u);
                    stack.pop();
                }
            }
        }

        let mut assigned = vec![false; n];
        let mut components = Vec::new();
        for &root in finished.iter().rev() {
            if assigned[root] {
                continue;
            }
            assigned[root] = true;
            let mut members = vec![root];
            let mut next = 0;
            while next < members.len() {
                let u = members[next];
                next += 1;
                for &w in self.in_neighbors(u) {
                    if !assigned[w] {
                        assigned[w] = true;
                        members.push(w);
                    }
                }
            }
            components.push(members);
        }
        components
    }
}

/// Builds the interaction graph.
///
/// Under `Endorsement` an edge runs actor → target; under `InfoFlow` it runs
/// target → actor. Ids follow sorted label order, so any permutation of the
/// same records yields the same graph. Every label seen (including those only
/// in dropped self-loops) becomes a node.
pub fn build_graph(records: &[InteractionRecord], convention: Direction) -> Result<DirectedGraph> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut labels: Vec<&str> = Vec::with_capacity(records.len() * 2);
    for (i, r) in records.iter().enumerate() {
        if r.actor.is_empty() || r.target.is_empty() {
            return Err(Error::Parse {
                line: i as u64 + 1,
                message: "record is missing actor or target".into(),
            });
        }
        labels.push(&r.actor);
        labels.push(&r.target);
    }
    labels.sort_unstable_by(|a, b| label_cmp(a, b));
    labels.dedup();
    let index: HashMap<&str, NodeId> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();

    let edges = records
        .iter()
        .map(|r| {
            let (a, t) = (index[r.actor.as_str()], index[r.target.as_str()]);
            let w = r.weight.unwrap_or(1.0);
            match convention {
                Direction::Endorsement => (a, t, w),
                Direction::InfoFlow => (t, a, w),
            }
        })
        .collect::<Vec<_>>();
    let labels = labels.into_iter().map(str::to_owned).collect();
    let g = DirectedGraph::from_weighted_edges(labels, edges, convention)?;
    if g.dropped_self_loops() > 0 {
        log::warn!("dropped {} self-loop interaction(s)", g.dropped_self_loops());
    }
    Ok(g)
}

/// Builds a graph from a labelled edge list stored in `stored_as` convention.
/// Ids follow sorted label order.
pub fn graph_from_labelled_edges(
    edges: &[(String, String, f64)],
    stored_as: Direction,
) -> Result<DirectedGraph> {
    if edges.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut labels: Vec<&str> = edges.iter().flat_map(|(s, d, _)| [s.as_str(), d.as_str()]).collect();
    labels.sort_unstable_by(|a, b| label_cmp(a, b));
    labels.dedup();
    let index: HashMap<&str, NodeId> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let raw = edges
        .iter()
        .map(|(s, d, w)| (index[s.as_str()], index[d.as_str()], *w))
        .collect::<Vec<_>>();
    let labels = labels.into_iter().map(str::to_owned).collect();
    DirectedGraph::from_weighted_edges(labels, raw, stored_as)
}
