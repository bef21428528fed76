use super::{Metric, ScoreVector};
use crate::graph::{DegreeMode, DirectedGraph};

/// Raw neighbour counts on the stored orientation; not normalised.
pub fn degree_centrality(g: &DirectedGraph, mode: DegreeMode) -> ScoreVector {
    let metric = match mode {
        DegreeMode::In => Metric::DegreeIn,
        DegreeMode::Out => Metric::DegreeOut,
        DegreeMode::Total => Metric::DegreeTotal,
    };
    let scores = (0..g.node_count())
        .map(|v| match mode {
            DegreeMode::In => g.in_degree(v),
            DegreeMode::Out => g.out_degree(v),
            DegreeMode::Total => g.in_degree(v) + g.out_degree(v),
        } as f64)
        .collect();
    ScoreVector::new(metric, g.labels().clone(), scores)
        .with_param("direction", g.convention().as_str())
}
