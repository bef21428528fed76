use super::{Metric, PowerIterationConfig, ScoreVector};
use crate::error::{Error, Result};
use crate::graph::{Direction, DirectedGraph};

/// Eigenvector centrality on the influence orientation (endorsement edges, so
/// a node gains from those who reshare it).
///
/// Iterates `x ← (A + I)ᵀ x` from the uniform vector with L2 normalisation
/// after every step. The identity shift leaves the dominant eigenvector
/// unchanged and keeps periodic graphs from oscillating. Non-convergence is
/// not an error: the last iterate is returned with `converged = false`.
pub fn eigenvector_centrality(g: &DirectedGraph, cfg: PowerIterationConfig) -> Result<ScoreVector> {
    eigenvector_trace(g, cfg).map(|(sv, _)| sv)
}

/// Same as [`eigenvector_centrality`], also returning the L1 change of every step.
pub fn eigenvector_trace(g: &DirectedGraph, cfg: PowerIterationConfig) -> Result<(ScoreVector, Vec<f64>)> {
    cfg.validate()?;
    if g.edge_count() == 0 {
        return Err(Error::ZeroMatrix);
    }
    let view = g.oriented(Direction::Endorsement);
    let n = view.node_count();

    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    let mut changes = Vec::new();
    let mut converged = false;
    for _ in 0..cfg.max_iterations {
        for v in 0..n {
            let pulled: f64 = view
                .in_neighbors(v)
                .iter()
                .zip(view.in_weights(v))
                .map(|(&u, &w)| w * x[u])
                .sum();
            y[v] = x[v] + pulled;
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        y.iter_mut().for_each(|v| *v /= norm);
        let change: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut y);
        changes.push(change);
        if change < cfg.tolerance {
            converged = true;
            break;
        }
    }

    let mut sv = ScoreVector::new(Metric::Eigenvector, g.labels().clone(), x)
        .with_param("tolerance", cfg.tolerance)
        .with_param("max_iterations", cfg.max_iterations)
        .with_param("converged", converged)
        .with_param("strongly_connected", view.is_strongly_connected())
        .with_param("weighted", true)
        .with_param("direction", Direction::Endorsement.as_str());
    sv.iterations_run = changes.len();
    Ok((sv, changes))
}
