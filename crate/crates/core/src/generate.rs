//! Seeded synthetic graphs for experiments and benchmarks.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Direction, DirectedGraph};
use crate::rng::stream_rng;

fn numbered_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Barabási-Albert preferential attachment, directed.
///
/// Starts from `m` isolated nodes; every later node attaches to `m` distinct
/// earlier nodes chosen with probability proportional to their current
/// degree (uniformly while all degrees are zero). Each undirected attachment
/// is oriented by a fair coin, so out-degree averages `m` and hubs both
/// broadcast and receive. Labels are `"0".."n-1"`.
pub fn preferential_attachment(n: usize, m: usize, seed: u64) -> Result<DirectedGraph> {
    if m == 0 || n <= m {
        return Err(Error::invalid(format!("preferential attachment needs n > m >= 1 (n={n}, m={m})")));
    }
    let mut rng = stream_rng(seed, "preferential_attachment");
    // Every edge endpoint appears once here, so a uniform pick is degree-proportional.
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * n * m);
    let mut edges = Vec::with_capacity(n * m);
    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    for v in m..n {
        chosen.clear();
        while chosen.len() < m {
            let t = if endpoints.is_empty() { rng.gen_range(0..v) } else { endpoints[rng.gen_range(0..endpoints.len())] };
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            if rng.gen_bool(0.5) {
                edges.push((v, t, 1.0));
            } else {
                edges.push((t, v, 1.0));
            }
            endpoints.push(v);
            endpoints.push(t);
        }
    }
    DirectedGraph::from_weighted_edges(numbered_labels(n), edges, Direction::InfoFlow)
}

/// `G(n, p)` digraph: every ordered pair `u ≠ v` is an edge with probability `p`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<DirectedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} not in [0,1]")));
    }
    let mut rng = stream_rng(seed, "gnp");
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                edges.push((u, v, 1.0));
            }
        }
    }
    DirectedGraph::from_weighted_edges(numbered_labels(n), edges, Direction::InfoFlow)
}

/// A directed Hamiltonian cycle over a random permutation plus `extra`
/// random chords with integer weights in `1..=max_weight`. Always strongly
/// connected.
pub fn strongly_connected(n: usize, extra: usize, max_weight: u32, seed: u64) -> Result<DirectedGraph> {
    if n < 2 || max_weight == 0 {
        return Err(Error::invalid("strongly connected generator needs n >= 2 and max_weight >= 1"));
    }
    let mut rng = stream_rng(seed, "strongly_connected");
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let weight = |rng: &mut rand_chacha::ChaCha8Rng| f64::from(rng.gen_range(1..=max_weight));
    let mut edges: Vec<(usize, usize, f64)> = (0..n).map(|i| (perm[i], perm[(i + 1) % n], weight(&mut rng))).collect();
    for _ in 0..extra {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            edges.push((u, v, weight(&mut rng)));
        }
    }
    DirectedGraph::from_weighted_edges(numbered_labels(n), edges, Direction::InfoFlow)
}
