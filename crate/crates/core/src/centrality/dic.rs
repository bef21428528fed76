//! Dynamic influence centrality: `s_{t+1}(v) = s_t(v) + Σ_{u→v} s_t(u)`
//! from `s_0 = 1`, i.e. `s_T = (I + Aᵀ)^T · 1` on the unweighted adjacency.
//!
//! The recurrence is linear and homogeneous, so dividing the iterate by its
//! maximum after each step changes only the overall scale, never the ratios.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{min_max_normalise, Metric, ScoreVector};
use crate::error::{Error, Result};
use crate::graph::{Direction, DirectedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DicConfig {
    pub steps: u32,
    /// Divide by the running maximum after every step.
    pub rescale_each_step: bool,
    /// Orientation whose in-neighbours feed each node.
    pub direction: Direction,
}

impl Default for DicConfig {
    fn default() -> Self {
        DicConfig {
            steps: 10,
            rescale_each_step: true,
            direction: Direction::InfoFlow,
        }
    }
}

/// Runs the recurrence for `steps` steps and returns the final iterate
/// before min-max. Without rescaling the values are the literal recurrence
/// and may overflow on large graphs.
pub fn dic_accumulate(g: &DirectedGraph, steps: u32, rescale: bool) -> Vec<f64> {
    let n = g.node_count();
    let mut s = vec![1.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..steps {
        next.par_iter_mut().enumerate().for_each(|(v, out)| {
            *out = s[v] + g.in_neighbors(v).iter().map(|&u| s[u]).sum::<f64>();
        });
        if rescale {
            let max = next.iter().copied().fold(0.0, f64::max);
            if max > 0.0 {
                next.iter_mut().for_each(|x| *x /= max);
            }
        }
        std::mem::swap(&mut s, &mut next);
    }
    s
}

pub fn dic(g: &DirectedGraph, cfg: &DicConfig) -> Result<ScoreVector> {
    if cfg.steps == 0 {
        return Err(Error::invalid("dic steps must be at least 1"));
    }
    if g.node_count() == 0 {
        return Err(Error::EmptyInput);
    }
    let view = g.oriented(cfg.direction);
    let mut scores = dic_accumulate(&view, cfg.steps, cfg.rescale_each_step);
    min_max_normalise(&mut scores);

    let mut sv = ScoreVector::new(Metric::Dic, g.labels().clone(), scores)
        .with_param("steps", cfg.steps)
        .with_param("rescale_each_step", cfg.rescale_each_step)
        .with_param("final_normalisation", "min_max")
        .with_param("direction", cfg.direction.as_str());
    sv.iterations_run = cfg.steps as usize;
    sv.normalised = true;
    Ok(sv)
}
