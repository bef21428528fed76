//! Propagation centrality: damped PageRank on the influence orientation.
//!
//! `x(v) = (1-d)/n + d · (D/n + Σ_{u→v} x(u) · share(u,v))`
//!
//! where `D` is the rank mass sitting on dangling nodes and `share(u,v)` is
//! `1/outdeg(u)` (or `w(u,v)/strength(u)` in weighted mode). Redistributing
//! `D` uniformly keeps the iterate a probability vector.
//!
//! The default solver sweeps nodes in place (Gauss-Seidel). A Jacobi sweep
//! contracts by only `d` per step on graphs with periodic or leaking closed
//! classes, which at `d = 0.85` needs about 140 steps to reach an L1 change
//! of 1e-10. In-place sweeps visit upstream components first and follow the
//! edges inside each one, which gets there well within 100 on such graphs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Metric, ScoreVector};
use crate::error::{Error, Result};
use crate::graph::{Direction, DirectedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PcConfig {
    pub damping: f64,
    /// L1 change threshold between successive iterates.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Split rank mass in proportion to edge weight instead of evenly.
    pub weighted: bool,
    /// Orientation the walk follows. Endorsement edges make resharing confer
    /// rank on the original author.
    pub direction: Direction,
    pub solver: PcSolver,
}

/// How each iteration updates the vector. Both converge to the same fixed
/// point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PcSolver {
    /// Jacobi sweep `x ← G x` (classic power iteration).
    Power,
    /// In-place sweep in node order using already-updated values, then
    /// rescaled to sum 1.
    #[default]
    GaussSeidel,
}

impl Default for PcConfig {
    fn default() -> Self {
        PcConfig {
            damping: 0.85,
            tolerance: 1e-10,
            max_iterations: 100,
            weighted: false,
            direction: Direction::Endorsement,
            solver: PcSolver::GaussSeidel,
        }
    }
}

impl PcConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::invalid(format!("damping {} not in (0,1)", self.damping)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("pc tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("pc max_iterations must be at least 1"));
        }
        Ok(())
    }
}

pub fn propagation_centrality(g: &DirectedGraph, cfg: &PcConfig) -> Result<ScoreVector> {
    cfg.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let view = g.oriented(cfg.direction);
    let walk = Walk::new(&view, cfg);

    let mut x = vec![1.0 / n as f64; n];
    let mut prev = x.clone();
    let mut iterations = 0;
    let mut converged = false;
    let mut change = f64::INFINITY;
    while iterations < cfg.max_iterations {
        iterations += 1;
        match cfg.solver {
            PcSolver::Power => walk.jacobi_sweep(&prev, &mut x),
            PcSolver::GaussSeidel => walk.gauss_seidel_sweep(&mut x),
        }
        change = x.iter().zip(&prev).map(|(a, b)| (a - b).abs()).sum();
        prev.copy_from_slice(&x);
        if change < cfg.tolerance {
            converged = true;
            break;
        }
    }

    let mut sv = ScoreVector::new(Metric::Pc, g.labels().clone(), x)
        .with_param("damping", cfg.damping)
        .with_param("tolerance", cfg.tolerance)
        .with_param("max_iterations", cfg.max_iterations)
        .with_param("weighted", cfg.weighted)
        .with_param("dangling", "uniform")
        .with_param("direction", cfg.direction.as_str())
        .with_param("solver", serde_json::to_value(cfg.solver).unwrap_or_default())
        .with_param("converged", converged)
        .with_param("final_change", change);
    sv.iterations_run = iterations;
    Ok(sv)
}

struct Walk<'g> {
    g: &'g DirectedGraph,
    d: f64,
    n: f64,
    weighted: bool,
    /// Out-degree, or out-strength when weighted.
    norm: Vec<f64>,
    dangling: Vec<bool>,
    /// Gauss-Seidel visiting order: upstream components first so each
    /// sweep already sees this sweep's values for most incoming mass.
    order: Vec<usize>,
}

impl<'g> Walk<'g> {
    fn new(g: &'g DirectedGraph, cfg: &PcConfig) -> Self {
        let n = g.node_count();
        Walk {
            g,
            d: cfg.damping,
            n: n as f64,
            weighted: cfg.weighted,
            norm: (0..n)
                .map(|u| if cfg.weighted { g.out_strength(u) } else { g.out_degree(u) as f64 })
                .collect(),
            dangling: (0..n).map(|u| g.out_degree(u) == 0).collect(),
            // Components arrive upstream first; members are discovered against the
            // edges, so reversing them walks each component with the flow.
            order: g.strongly_connected_components().into_iter().flat_map(|c| c.into_iter().rev()).collect(),
        }
    }

    fn pulled(&self, x: &[f64], v: usize) -> f64 {
        let from = self.g.in_neighbors(v);
        if self.weighted {
            from.iter().zip(self.g.in_weights(v)).map(|(&u, &w)| x[u] * w / self.norm[u]).sum()
        } else {
            from.iter().map(|&u| x[u] / self.norm[u]).sum()
        }
    }

    fn dangling_mass(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.dangling).filter(|(_, &d)| d).map(|(v, _)| v).sum()
    }

    fn jacobi_sweep(&self, prev: &[f64], out: &mut [f64]) {
        let base = (1.0 - self.d) / self.n + self.d * self.dangling_mass(prev) / self.n;
        out.par_iter_mut()
            .enumerate()
            .for_each(|(v, o)| *o = base + self.d * self.pulled(prev, v));
    }

    /// Solves each node's equation exactly given the current values of all
    /// others; a dangling node's own share of the redistributed mass is
    /// moved to the left-hand side.
    fn gauss_seidel_sweep(&self, x: &mut [f64]) {
        let (d, n) = (self.d, self.n);
        let mut dangling = self.dangling_mass(x);
        for &v in &self.order {
            let rhs = (1.0 - d) / n + d * self.pulled(x, v);
            if self.dangling[v] {
                let others = dangling - x[v];
                let new = (rhs + d * others / n) / (1.0 - d / n);
                dangling = others + new;
                x[v] = new;
            } else {
                x[v] = rhs + d * dangling / n;
            }
        }
        let total: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= total);
    }
}
