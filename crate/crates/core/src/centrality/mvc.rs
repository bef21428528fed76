//! Misinformation vulnerability centrality.
//!
//! The recurrence `vul_{t+1}(v) = exposure(v) · vul_t(v)` has the closed form
//! `vul_T(v) = exposure(v)^T · vul_0(v)`, which overflows for realistic
//! degrees. Scores are therefore evaluated as
//! `log vul_T = T·ln(exposure) + ln(vul_0)` and min-max normalised in the log
//! domain. Ranking is identical to the literal recurrence.
//!
//! Nodes with zero exposure or zero initial vulnerability are pinned to 0.
//! When such nodes exist, the floor of the log range is placed one e-fold
//! below the smallest positive node so that node stays strictly above the
//! pinned ones.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Metric, ScoreVector};
use crate::error::{Error, Result};
use crate::graph::{DegreeMode, Direction, DirectedGraph};
use crate::rng::{keyed_open01, substream};

/// Optional per-node observables, aligned with graph ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NodeAttributes {
    pub vulnerability: Vec<Option<f64>>,
    pub retweet_count: Vec<Option<f64>>,
    pub emotion_word_count: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Proxy {
    Vulnerability,
    RetweetCount,
    EmotionWordCount,
}

impl Proxy {
    pub fn name(self) -> &'static str {
        match self {
            Proxy::Vulnerability => "vulnerability",
            Proxy::RetweetCount => "retweet_count",
            Proxy::EmotionWordCount => "emotion_word_count",
        }
    }
}

impl FromStr for Proxy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "vulnerability" => Ok(Proxy::Vulnerability),
            "retweet_count" | "retweets" => Ok(Proxy::RetweetCount),
            "emotion_word_count" | "emotion_words" => Ok(Proxy::EmotionWordCount),
            other => Err(Error::invalid(format!("unknown proxy attribute `{other}`"))),
        }
    }
}

impl NodeAttributes {
    pub fn empty(n: usize) -> Self {
        NodeAttributes {
            vulnerability: vec![None; n],
            retweet_count: vec![None; n],
            emotion_word_count: vec![None; n],
        }
    }

    pub fn len(&self) -> usize {
        self.vulnerability.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vulnerability.is_empty()
    }

    pub fn get(&self, proxy: Proxy) -> &[Option<f64>] {
        match proxy {
            Proxy::Vulnerability => &self.vulnerability,
            Proxy::RetweetCount => &self.retweet_count,
            Proxy::EmotionWordCount => &self.emotion_word_count,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for v in self.vulnerability.iter().flatten() {
            if !(0.0..=1.0).contains(v) {
                return Err(Error::invalid(format!("vulnerability {v} outside [0,1]")));
            }
        }
        for v in self.retweet_count.iter().chain(&self.emotion_word_count).flatten() {
            if !(*v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("count attribute {v} must be non-negative")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MvcInit {
    /// `vul_0 ~ U(0,1)`, one draw per node keyed by the node's id (its
    /// sorted-label index).
    SeededUniform { seed: u64 },
    /// `vul_0` read from [`NodeAttributes::vulnerability`].
    Attribute,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MvcConfig {
    pub init: MvcInit,
    pub steps: u32,
    pub exposure: DegreeMode,
    /// Orientation whose in-degree counts as exposure.
    pub direction: Direction,
}

impl Default for MvcConfig {
    fn default() -> Self {
        MvcConfig {
            init: MvcInit::SeededUniform { seed: 0 },
            steps: 5,
            exposure: DegreeMode::In,
            direction: Direction::InfoFlow,
        }
    }
}

/// Initial vulnerabilities for the given config.
pub fn initial_vulnerability(g: &DirectedGraph, attrs: Option<&NodeAttributes>, init: MvcInit) -> Result<Vec<f64>> {
    let n = g.node_count();
    match init {
        MvcInit::SeededUniform { seed } => {
            let stream = substream(seed, "mvc");
            Ok((0..n).map(|v| keyed_open01(stream, v as u64)).collect())
        }
        MvcInit::Attribute => {
            let attrs = attrs.ok_or_else(|| Error::MissingAttribute(g.label(0).to_owned()))?;
            attrs.validate()?;
            (0..n)
                .map(|v| {
                    attrs
                        .vulnerability
                        .get(v)
                        .copied()
                        .flatten()
                        .ok_or_else(|| Error::MissingAttribute(g.label(v).to_owned()))
                })
                .collect()
        }
    }
}

pub fn mvc(g: &DirectedGraph, attrs: Option<&NodeAttributes>, cfg: &MvcConfig) -> Result<ScoreVector> {
    if cfg.steps == 0 {
        return Err(Error::invalid("mvc steps must be at least 1"));
    }
    let view = g.oriented(cfg.direction);
    let n = view.node_count();
    let vul0 = initial_vulnerability(g, attrs, cfg.init)?;
    let t = f64::from(cfg.steps);

    let log_scores: Vec<Option<f64>> = (0..n)
        .map(|v| {
            let exposure = view.degree(v, cfg.exposure).expect("node in range");
            (exposure > 0 && vul0[v] > 0.0).then(|| t * (exposure as f64).ln() + vul0[v].ln())
        })
        .collect();

    let positive = log_scores.iter().flatten();
    let (lo, hi) = positive.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let has_pinned = log_scores.iter().any(Option::is_none);
    let floor = if has_pinned { lo - 1.0 } else { lo };
    let span = hi - floor;
    let scores = log_scores
        .iter()
        .map(|s| match s {
            Some(v) if span > 0.0 => (v - floor) / span,
            _ => 0.0,
        })
        .collect();

    let mut sv = ScoreVector::new(Metric::Mvc, g.labels().clone(), scores)
        .with_param("steps", cfg.steps)
        .with_param("exposure", serde_json::to_value(cfg.exposure).unwrap_or_default())
        .with_param("direction", cfg.direction.as_str())
        .with_param("normalisation", "log_min_max")
        .with_param("pinned_floor_offset", if has_pinned { 1.0 } else { 0.0 });
    sv = match cfg.init {
        MvcInit::SeededUniform { seed } => sv.with_param("init", "seeded_uniform").with_param("seed", seed),
        MvcInit::Attribute => sv.with_param("init", "attribute"),
    };
    sv.iterations_run = cfg.steps as usize;
    sv.normalised = true;
    Ok(sv)
}
