//! Harmonic closeness: `C(v) = Σ_{u≠v} 1/d(v,u)`, unreachable targets add 0.
//!
//! Hop distances use a multi-source BFS that advances 64 sources at once
//! with one bit per source in each node's frontier word. Each batch is
//! independent, so batches run in parallel without changing any sum.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered_float::OrderedFloat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Metric, ScoreVector};
use crate::graph::DirectedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMode {
    /// Unweighted hop counts.
    #[default]
    Hops,
    /// Edge length `1 / weight`, shortest paths via Dijkstra.
    InverseWeight,
}

const LANES: usize = 64;

pub fn closeness_centrality(g: &DirectedGraph) -> ScoreVector {
    closeness_centrality_with(g, DistanceMode::Hops)
}

/// Closeness along outgoing paths of `g` as stored. Pass the transpose to
/// measure how close every other node is *to* `v` instead.
pub fn closeness_centrality_with(g: &DirectedGraph, distance: DistanceMode) -> ScoreVector {
    let n = g.node_count();
    let scores = match distance {
        DistanceMode::Hops => {
            let batches: Vec<usize> = (0..n).step_by(LANES).collect();
            let per_batch: Vec<Vec<f64>> = batches
                .par_iter()
                .map_init(|| BfsLanes::new(n), |lanes, &start| lanes.run(g, start, (start + LANES).min(n)))
                .collect();
            per_batch.into_iter().flatten().collect()
        }
        DistanceMode::InverseWeight => (0..n)
            .into_par_iter()
            .map_init(|| vec![f64::INFINITY; n], |dist, s| harmonic_dijkstra(g, s, dist))
            .collect(),
    };
    ScoreVector::new(Metric::Closeness, g.labels().clone(), scores)
        .with_param("variant", "harmonic")
        .with_param("distance", serde_json::to_value(distance).unwrap_or_default())
        .with_param("direction", g.convention().as_str())
}

struct BfsLanes {
    seen: Vec<u64>,
    frontier: Vec<u64>,
    next: Vec<u64>,
    active: Vec<usize>,
    touched: Vec<usize>,
    reached: Vec<usize>,
}

impl BfsLanes {
    fn new(n: usize) -> Self {
        BfsLanes {
            seen: vec![0; n],
            frontier: vec![0; n],
            next: vec![0; n],
            active: Vec::new(),
            touched: Vec::new(),
            reached: Vec::new(),
        }
    }

    /// Harmonic sums for sources `start..end` (at most 64 of them).
    fn run(&mut self, g: &DirectedGraph, start: usize, end: usize) -> Vec<f64> {
        let lanes = end - start;
        let mut sums = vec![0.0; lanes];
        let mut reached = [0u32; LANES];

        self.active.clear();
        self.reached.clear();
        self.reached.extend(start..end);
        for (bit, s) in (start..end).enumerate() {
            self.seen[s] |= 1 << bit;
            self.frontier[s] |= 1 << bit;
            self.active.push(s);
        }

        let mut level = 0u32;
        while !self.active.is_empty() {
            level += 1;
            self.touched.clear();
            for &v in &self.active {
                let f = self.frontier[v];
                self.frontier[v] = 0;
                for &w in g.out_neighbors(v) {
                    let add = f & !self.seen[w];
                    if add != 0 {
                        if self.next[w] == 0 {
                            self.touched.push(w);
                        }
                        self.next[w] |= add;
                    }
                }
            }
            for &w in &self.touched {
                let mut fresh = self.next[w];
                self.next[w] = 0;
                self.seen[w] |= fresh;
                self.frontier[w] = fresh;
                while fresh != 0 {
                    reached[fresh.trailing_zeros() as usize] += 1;
                    fresh &= fresh - 1;
                }
            }
            let inv = 1.0 / f64::from(level);
            for (sum, count) in sums.iter_mut().zip(reached.iter_mut()) {
                *sum += f64::from(*count) * inv;
                *count = 0;
            }
            self.reached.extend_from_slice(&self.touched);
            std::mem::swap(&mut self.active, &mut self.touched);
        }

        for &v in &self.reached {
            self.seen[v] = 0;
        }
        sums
    }
}

fn harmonic_dijkstra(g: &DirectedGraph, s: usize, dist: &mut [f64]) -> f64 {
    let mut heap = BinaryHeap::new();
    let mut settled = Vec::new();
    dist[s] = 0.0;
    heap.push(Reverse((OrderedFloat(0.0), s)));
    let mut total = 0.0;
    while let Some(Reverse((OrderedFloat(d), v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        settled.push(v);
        if v != s {
            total += 1.0 / d;
        }
        for (&w, &wt) in g.out_neighbors(v).iter().zip(g.out_weights(v)) {
            let nd = d + 1.0 / wt;
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(Reverse((OrderedFloat(nd), w)));
            }
        }
    }
    for v in settled {
        dist[v] = f64::INFINITY;
    }
    total
}
