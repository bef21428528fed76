//! Brandes betweenness over ordered pairs, unnormalised.
//!
//! Sources are processed in fixed-size chunks. Within a chunk the per-source
//! dependency vectors are computed in parallel, then added to the total in
//! ascending source order, so the floating-point sum is the same for any
//! worker count.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered_float::OrderedFloat;
use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DistanceMode, Metric, ScoreVector};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::rng::stream_rng;

/// Graphs up to this size get exact betweenness under [`BetweennessMode::auto`].
pub const EXACT_LIMIT: usize = 20_000;

const CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum BetweennessMode {
    Exact,
    /// `k` uniformly drawn source pivots, scores rescaled by `n / k`.
    Sampled { k: usize, seed: u64 },
}

impl BetweennessMode {
    /// Exact up to [`EXACT_LIMIT`] nodes, otherwise `max(256, n/100)` pivots.
    pub fn auto(n: usize, seed: u64) -> Self {
        if n <= EXACT_LIMIT {
            BetweennessMode::Exact
        } else {
            BetweennessMode::Sampled {
                k: (n / 100).max(256).min(n),
                seed,
            }
        }
    }
}

pub fn betweenness_centrality(g: &DirectedGraph, mode: BetweennessMode, distance: DistanceMode) -> Result<ScoreVector> {
    let n = g.node_count();
    let (sources, scale): (Vec<usize>, f64) = match mode {
        BetweennessMode::Exact => ((0..n).collect(), 1.0),
        BetweennessMode::Sampled { k, seed } => {
            if k == 0 || k > n {
                return Err(Error::invalid(format!("betweenness sample size {k} outside 1..={n}")));
            }
            let mut rng = stream_rng(seed, "betweenness");
            let mut pivots = sample(&mut rng, n, k).into_vec();
            pivots.sort_unstable();
            (pivots, n as f64 / k as f64)
        }
    };

    let mut total = vec![0.0; n];
    for chunk in sources.chunks(CHUNK) {
        let deltas: Vec<Vec<f64>> = chunk
            .par_iter()
            .map_init(
                || Workspace::new(n),
                |ws, &s| match distance {
                    DistanceMode::Hops => ws.bfs_dependencies(g, s),
                    DistanceMode::InverseWeight => ws.dijkstra_dependencies(g, s),
                },
            )
            .collect();
        for delta in deltas {
            for (t, d) in total.iter_mut().zip(delta) {
                *t += d;
            }
        }
    }
    if scale != 1.0 {
        total.iter_mut().for_each(|v| *v *= scale);
    }

    let mut sv = ScoreVector::new(Metric::Betweenness, g.labels().clone(), total)
        .with_param("distance", serde_json::to_value(distance).unwrap_or_default())
        .with_param("direction", g.convention().as_str());
    match mode {
        BetweennessMode::Exact => sv = sv.with_param("mode", "exact"),
        BetweennessMode::Sampled { k, seed } => {
            sv = sv.with_param("mode", "sampled").with_param("samples", k).with_param("seed", seed)
        }
    }
    Ok(sv)
}

struct Workspace {
    sigma: Vec<f64>,
    delta: Vec<f64>,
    hops: Vec<i64>,
    dist: Vec<f64>,
    order: Vec<usize>,
    queue: std::collections::VecDeque<usize>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            hops: vec![-1; n],
            dist: vec![f64::INFINITY; n],
            order: Vec::new(),
            queue: Default::default(),
        }
    }

    /// Dependency of `s` on every node; entry `s` itself is 0.
    fn bfs_dependencies(&mut self, g: &DirectedGraph, s: usize) -> Vec<f64> {
        self.order.clear();
        self.sigma[s] = 1.0;
        self.hops[s] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let next = self.hops[v] + 1;
            for &w in g.out_neighbors(v) {
                if self.hops[w] < 0 {
                    self.hops[w] = next;
                    self.queue.push_back(w);
                }
                if self.hops[w] == next {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
        let hops = std::mem::take(&mut self.hops);
        let out = self.accumulate(g, s, |v, w| hops[v] + 1 == hops[w]);
        self.hops = hops;
        for &v in &self.order {
            self.hops[v] = -1;
        }
        out
    }

    fn dijkstra_dependencies(&mut self, g: &DirectedGraph, s: usize) -> Vec<f64> {
        self.order.clear();
        let mut heap = BinaryHeap::new();
        let mut done = vec![false; g.node_count()];
        self.dist[s] = 0.0;
        self.sigma[s] = 1.0;
        heap.push(Reverse((OrderedFloat(0.0), s)));
        while let Some(Reverse((OrderedFloat(d), v))) = heap.pop() {
            if done[v] || d > self.dist[v] {
                continue;
            }
            done[v] = true;
            self.order.push(v);
            for (&w, &wt) in g.out_neighbors(v).iter().zip(g.out_weights(v)) {
                let nd = d + 1.0 / wt;
                if nd < self.dist[w] {
                    self.dist[w] = nd;
                    self.sigma[w] = self.sigma[v];
                    heap.push(Reverse((OrderedFloat(nd), w)));
                } else if nd == self.dist[w] {
                    self.sigma[w] += self.sigma[v];
                }
            }
        }
        let dist = std::mem::take(&mut self.dist);
        let out = self.accumulate(g, s, |v, w| {
            let wt = g.edge_weight(v, w).unwrap_or(f64::NAN);
            dist[v] + 1.0 / wt == dist[w]
        });
        self.dist = dist;
        for &v in &self.order {
            self.dist[v] = f64::INFINITY;
        }
        out
    }

    /// Back-propagates dependencies over `order` in reverse, then resets
    /// `sigma` and `delta`.
    fn accumulate(&mut self, g: &DirectedGraph, s: usize, on_shortest: impl Fn(usize, usize) -> bool) -> Vec<f64> {
        let mut out = vec![0.0; g.node_count()];
        for &w in self.order.iter().rev() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &v in g.in_neighbors(w) {
                if self.sigma[v] > 0.0 && on_shortest(v, w) {
                    self.delta[v] += self.sigma[v] * coeff;
                }
            }
            if w != s {
                out[w] = self.delta[w];
            }
        }
        for &v in &self.order {
            self.sigma[v] = 0.0;
            self.delta[v] = 0.0;
        }
        out
    }
}
