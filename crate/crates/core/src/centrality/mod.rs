//! Centrality metrics. Every metric returns a [`ScoreVector`] aligned with the
//! graph's node ids.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::DegreeMode;

mod betweenness;
mod closeness;
mod degree;
mod dic;
mod eigenvector;
mod mvc;
mod pc;

pub use betweenness::{betweenness_centrality, BetweennessMode};
pub use closeness::{closeness_centrality, closeness_centrality_with, DistanceMode};
pub use degree::degree_centrality;
pub use dic::{dic, dic_accumulate, DicConfig};
pub use eigenvector::{eigenvector_centrality, eigenvector_trace};
pub use mvc::{mvc, MvcConfig, MvcInit, NodeAttributes, Proxy};
pub use pc::{propagation_centrality, PcConfig, PcSolver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    DegreeIn,
    DegreeOut,
    DegreeTotal,
    Closeness,
    Betweenness,
    Eigenvector,
    Pc,
    Mvc,
    Dic,
}

impl Metric {
    pub const ALL: [Metric; 9] = [
        Metric::DegreeIn,
        Metric::DegreeOut,
        Metric::DegreeTotal,
        Metric::Closeness,
        Metric::Betweenness,
        Metric::Eigenvector,
        Metric::Pc,
        Metric::Mvc,
        Metric::Dic,
    ];

    /// The seven metrics of a default full run.
    pub const DEFAULT_SET: [Metric; 7] = [
        Metric::DegreeTotal,
        Metric::Eigenvector,
        Metric::Betweenness,
        Metric::Closeness,
        Metric::Pc,
        Metric::Mvc,
        Metric::Dic,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Metric::DegreeIn => "degree_in",
            Metric::DegreeOut => "degree_out",
            Metric::DegreeTotal => "degree_total",
            Metric::Closeness => "closeness",
            Metric::Betweenness => "betweenness",
            Metric::Eigenvector => "eigenvector",
            Metric::Pc => "pc",
            Metric::Mvc => "mvc",
            Metric::Dic => "dic",
        }
    }

    /// Human-facing name used in region labels.
    pub fn display_name(self) -> &'static str {
        match self {
            Metric::DegreeIn => "In-degree",
            Metric::DegreeOut => "Out-degree",
            Metric::DegreeTotal => "Degree",
            Metric::Closeness => "Closeness",
            Metric::Betweenness => "Betweenness",
            Metric::Eigenvector => "Eigenvector",
            Metric::Pc => "PC",
            Metric::Mvc => "MVC",
            Metric::Dic => "DIC",
        }
    }

    pub fn is_traditional(self) -> bool {
        !matches!(self, Metric::Pc | Metric::Mvc | Metric::Dic)
    }

    pub fn degree_mode(self) -> Option<DegreeMode> {
        match self {
            Metric::DegreeIn => Some(DegreeMode::In),
            Metric::DegreeOut => Some(DegreeMode::Out),
            Metric::DegreeTotal => Some(DegreeMode::Total),
            _ => None,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let m = match key.as_str() {
            "degree" | "degree_total" => Metric::DegreeTotal,
            "degree_in" | "in_degree" => Metric::DegreeIn,
            "degree_out" | "out_degree" => Metric::DegreeOut,
            "closeness" | "harmonic" => Metric::Closeness,
            "betweenness" => Metric::Betweenness,
            "eigenvector" => Metric::Eigenvector,
            "pc" | "propagation" => Metric::Pc,
            "mvc" | "vulnerability" => Metric::Mvc,
            "dic" | "dynamic_influence" => Metric::Dic,
            _ => return Err(Error::invalid(format!("unknown metric `{s}`"))),
        };
        Ok(m)
    }
}

pub type Params = BTreeMap<String, Value>;

/// Per-node scores of one metric plus the parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub metric: Metric,
    pub labels: Arc<[String]>,
    pub scores: Vec<f64>,
    pub params: Params,
    pub iterations_run: usize,
    pub normalised: bool,
}

impl ScoreVector {
    pub fn new(metric: Metric, labels: Arc<[String]>, scores: Vec<f64>) -> Self {
        debug_assert_eq!(labels.len(), scores.len());
        ScoreVector {
            metric,
            labels,
            scores,
            params: Params::new(),
            iterations_run: 0,
            normalised: false,
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }
}

/// Stopping rule for power iterations: stop once the L1 change between
/// successive iterates drops below `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PowerIterationConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PowerIterationConfig {
    fn default() -> Self {
        PowerIterationConfig {
            tolerance: 1e-10,
            max_iterations: 1000,
        }
    }
}

impl PowerIterationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be at least 1"));
        }
        Ok(())
    }
}

/// Rescales to [0, 1]. A constant vector maps to all zeros.
pub fn min_max_normalise(values: &mut [f64]) {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = hi - lo;
    if !(span > 0.0) {
        values.iter_mut().for_each(|v| *v = 0.0);
        return;
    }
    for v in values.iter_mut() {
        *v = (*v - lo) / span;
    }
}
