//! Brute-force reference implementations shared by the property tests and
//! the acceptance harness. None of them calls into the library's algorithms;
//! graphs are described by plain edge lists.

#![allow(dead_code)]

pub mod published;

use std::collections::{BTreeMap, VecDeque};

use nalgebra::{DMatrix, DVector};
use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spreadrank::{Direction, DirectedGraph};

/// A simple digraph: `n` nodes, distinct weighted edges, no self-loops.
#[derive(Debug, Clone)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl EdgeList {
    /// Collapses duplicates (summing weights) and drops self-loops.
    pub fn new(n: usize, raw: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (u, v, w) in raw {
            if u != v {
                *map.entry((u, v)).or_insert(0.0) += w;
            }
        }
        EdgeList {
            n,
            edges: map.into_iter().map(|((u, v), w)| (u, v, w)).collect(),
        }
    }

    pub fn graph(&self, stored_as: Direction) -> DirectedGraph {
        let labels = (0..self.n).map(|i| i.to_string()).collect();
        DirectedGraph::from_weighted_edges(labels, self.edges.iter().copied(), stored_as).unwrap()
    }

    pub fn reversed(&self) -> EdgeList {
        EdgeList::new(self.n, self.edges.iter().map(|&(u, v, w)| (v, u, w)))
    }

    pub fn out_adj(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
        }
        adj
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == v).count()
    }
}

/// Proptest settings without on-disk failure persistence.
pub fn cases(n: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases: n,
        failure_persistence: None,
        ..Default::default()
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random digraph with `n` nodes; every ordered pair is an edge with
/// probability `p`, weights drawn from `1..=max_w`.
pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, p: f64, max_w: u32) -> EdgeList {
    let mut raw = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                raw.push((u, v, f64::from(rng.gen_range(1..=max_w))));
            }
        }
    }
    EdgeList::new(n, raw)
}

/// Random strongly connected digraph: a cycle through a shuffled order plus chords.
pub fn random_strongly_connected(rng: &mut ChaCha8Rng, n: usize, p: f64, max_w: u32) -> EdgeList {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut raw: Vec<(usize, usize, f64)> = (0..n)
        .map(|i| (order[i], order[(i + 1) % n], f64::from(rng.gen_range(1..=max_w))))
        .collect();
    raw.extend(random_digraph(rng, n, p, max_w).edges);
    EdgeList::new(n, raw)
}

/// Hop distances, `None` when unreachable (Floyd-Warshall).
pub fn hop_distances(g: &EdgeList) -> Vec<Vec<Option<u32>>> {
    let n = g.n;
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for &(u, v, _) in &g.edges {
        d[u][v] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Harmonic closeness from all-pairs distances.
pub fn closeness_oracle(g: &EdgeList) -> Vec<f64> {
    let d = hop_distances(g);
    (0..g.n)
        .map(|v| (0..g.n).filter(|&u| u != v).filter_map(|u| d[v][u]).map(|x| 1.0 / f64::from(x)).sum())
        .collect()
}

/// Betweenness from pairwise shortest-path counts:
/// `B(v) = Σ_{s≠v≠t} σ_sv·σ_vt / σ_st` over pairs with `d(s,v)+d(v,t)=d(s,t)`.
pub fn betweenness_oracle(g: &EdgeList) -> Vec<f64> {
    let n = g.n;
    let d = hop_distances(g);
    let mut preds = vec![Vec::new(); n];
    for &(u, v, _) in &g.edges {
        preds[v].push(u);
    }
    // sigma[s][t]: number of shortest s→t paths, by increasing distance.
    let mut sigma = vec![vec![0u128; n]; n];
    for s in 0..n {
        let mut by_dist: Vec<usize> = (0..n).filter(|&t| d[s][t].is_some()).collect();
        by_dist.sort_by_key(|&t| d[s][t]);
        sigma[s][s] = 1;
        for &t in by_dist.iter().skip(1) {
            let dt = d[s][t].unwrap();
            sigma[s][t] = preds[t].iter().filter(|&&u| d[s][u] == Some(dt - 1)).map(|&u| sigma[s][u]).sum();
        }
    }
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            let Some(dst) = d[s][t] else { continue };
            if s == t {
                continue;
            }
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                if let (Some(a), Some(c)) = (d[s][v], d[v][t]) {
                    if a + c == dst {
                        b[v] += (sigma[s][v] * sigma[v][t]) as f64 / sigma[s][t] as f64;
                    }
                }
            }
        }
    }
    b
}

/// Dominant eigenvector of `M` with `M[v][u] = w(u→v)`, from a dense
/// eigensolver: Perron root as the eigenvalue of largest real part, then the
/// null vector of `M − rI` via SVD. Unit L2 norm, non-negative.
pub fn eigenvector_oracle(g: &EdgeList) -> Vec<f64> {
    let n = g.n;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for &(u, v, w) in &g.edges {
        m[(v, u)] += w;
    }
    // Perron root by bisection: for λ > 0, λI − A is a nonsingular M-matrix
    // exactly when λ exceeds the spectral radius, which shows up as a strictly
    // positive solution of (λI − A)x = 1.
    let above = |lambda: f64| {
        let a = DMatrix::<f64>::identity(n, n) * lambda - &m;
        a.lu()
            .solve(&DVector::from_element(n, 1.0))
            .is_some_and(|x| x.iter().all(|&c| c > 0.0 && c.is_finite()))
    };
    let (mut lo, mut hi) = (0.0, m.row_iter().map(|r| r.sum()).fold(0.0, f64::max) + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let shifted = &m - DMatrix::<f64>::identity(n, n) * r;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors");
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let x: Vec<f64> = v_t.row(idx).iter().map(|c| c.abs()).collect();
    let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    x.into_iter().map(|c| c / norm).collect()
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// Damped random-walk stationary vector solved directly:
/// `(I − d·S − (d/n)·1·δᵀ) x = (1−d)/n · 1`, where `S[v][u] = 1/out(u)` for
/// each edge `u→v` and `δ` marks nodes without out-edges.
pub fn pagerank_oracle(g: &EdgeList, d: f64) -> Vec<f64> {
    let n = g.n;
    let nf = n as f64;
    let mut a = DMatrix::<f64>::identity(n, n);
    let outdeg: Vec<usize> = (0..n).map(|u| g.out_degree(u)).collect();
    for &(u, v, _) in &g.edges {
        a[(v, u)] -= d / outdeg[u] as f64;
    }
    for u in (0..n).filter(|&u| outdeg[u] == 0) {
        for v in 0..n {
            a[(v, u)] -= d / nf;
        }
    }
    let b = DVector::from_element(n, (1.0 - d) / nf);
    let x = a.lu().solve(&b).expect("non-singular system");
    x.iter().copied().collect()
}

/// Exact `exposure(v)^T · m(v)` where exposure is the in-degree.
pub fn mvc_oracle(g: &EdgeList, m: &[u64], t: u32) -> Vec<BigUint> {
    (0..g.n)
        .map(|v| BigUint::from(g.in_degree(v)).pow(t) * BigUint::from(m[v]))
        .collect()
}

/// Exact `s_{t+1}(v) = s_t(v) + Σ_{u→v} s_t(u)` from all ones.
pub fn dic_oracle(g: &EdgeList, steps: u32) -> Vec<BigUint> {
    let mut s = vec![BigUint::from(1u32); g.n];
    for _ in 0..steps {
        let mut next = s.clone();
        for &(u, v, _) in &g.edges {
            next[v] += &s[u];
        }
        s = next;
    }
    s
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Checks that `scores` orders nodes as `exact` does: strictly larger exact
/// values get strictly larger scores and exact ties get scores within `tie_tol`.
pub fn same_ranking<T: Ord>(exact: &[T], scores: &[f64], tie_tol: f64) -> Result<(), String> {
    for a in 0..exact.len() {
        for b in 0..exact.len() {
            match exact[a].cmp(&exact[b]) {
                std::cmp::Ordering::Greater if scores[a] <= scores[b] => {
                    return Err(format!("node {a} should outrank {b}: {} vs {}", scores[a], scores[b]));
                }
                std::cmp::Ordering::Equal if (scores[a] - scores[b]).abs() > tie_tol => {
                    return Err(format!("nodes {a} and {b} should tie: {} vs {}", scores[a], scores[b]));
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// Nodes reachable from `seeds` over `live` edges (seeds included).
pub fn reach_count(n: usize, live: &[(usize, usize)], seeds: &[usize]) -> usize {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in live {
        adj[u].push(v);
    }
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in seeds {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    let mut count = queue.len();
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count
}

/// Exact expected independent-cascade volume by enumerating every live-edge
/// subset: each edge is live independently with probability `p`.
pub fn cascade_oracle(g: &EdgeList, seeds: &[usize], p: f64) -> f64 {
    let m = g.edges.len();
    assert!(m <= 20, "enumeration over {m} edges is too large");
    let mut total = 0.0;
    for mask in 0u32..(1 << m) {
        let live: Vec<(usize, usize)> =
            (0..m).filter(|i| mask & (1 << i) != 0).map(|i| (g.edges[i].0, g.edges[i].1)).collect();
        let k = live.len() as i32;
        let prob = p.powi(k) * (1.0 - p).powi(m as i32 - k);
        total += prob * reach_count(g.n, &live, seeds) as f64;
    }
    total
}

/// Average ranks by counting: `#smaller + (#equal + 1) / 2`.
pub fn naive_average_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&a| {
            let smaller = x.iter().filter(|&&b| b < a).count() as f64;
            let equal = x.iter().filter(|&&b| b == a).count() as f64;
            smaller + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn naive_spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (naive_average_ranks(x), naive_average_ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
