//! Config-driven end-to-end run: ingest, metrics, top-k, overlap,
//! correlation and intervention experiments, written to an output directory.
//!
//! Every stochastic component takes the single `seed` of [`RunConfig`] and
//! derives its own named substream from it, so enabling one metric never
//! shifts another metric's draws.

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::centrality::{
    betweenness_centrality, closeness_centrality_with, degree_centrality, dic, eigenvector_centrality, mvc,
    propagation_centrality, BetweennessMode, DicConfig, DistanceMode, Metric, MvcConfig, MvcInit, NodeAttributes,
    Params, PcConfig, PowerIterationConfig, Proxy, ScoreVector,
};
use crate::error::{Error, Result};
use crate::graph::{build_graph, DegreeMode, Direction, DirectedGraph, NodeId};
use crate::io;
use crate::rank::{overlap_report, rank_correlation, top_k, CorrelationResult, OverlapReport, RankEntry, RankingTable};
use crate::rng::stream_rng;
use crate::sim::{
    equal_budget, intervention_experiment, removal_order, CascadeConfig, CascadeModel, InterventionResult,
    RemovalStrategy,
};

pub const TOOL_NAME: &str = "spreadrank";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    /// `actor,target,kind,timestamp,weight` records.
    #[default]
    Interactions,
    /// `src,dst,weight` rows.
    Edges,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interactions" => Ok(InputFormat::Interactions),
            "edges" | "edge-list" | "edge_list" => Ok(InputFormat::Edges),
            other => Err(Error::invalid(format!("unknown input format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DegreeSection {
    pub direction: Direction,
}

impl Default for DegreeSection {
    fn default() -> Self {
        DegreeSection {
            direction: Direction::InfoFlow,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClosenessSection {
    pub distance: DistanceMode,
    /// Paths are followed along this orientation.
    pub direction: Direction,
}

impl Default for ClosenessSection {
    fn default() -> Self {
        ClosenessSection {
            distance: DistanceMode::Hops,
            direction: Direction::InfoFlow,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetweennessChoice {
    /// Exact up to 20 000 nodes, sampled above.
    #[default]
    Auto,
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BetweennessSection {
    pub mode: BetweennessChoice,
    /// Pivot count for `sampled`; defaults to the `auto` rule.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub distance: DistanceMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MvcInitChoice {
    #[default]
    SeededUniform,
    Attribute,
}

impl FromStr for MvcInitChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seeded_uniform" | "seeded" | "uniform" => Ok(MvcInitChoice::SeededUniform),
            "attribute" => Ok(MvcInitChoice::Attribute),
            other => Err(Error::invalid(format!("unknown mvc init `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MvcSection {
    pub init: MvcInitChoice,
    pub steps: u32,
    pub exposure: DegreeMode,
    pub direction: Direction,
}

impl Default for MvcSection {
    fn default() -> Self {
        let d = MvcConfig::default();
        MvcSection {
            init: MvcInitChoice::SeededUniform,
            steps: d.steps,
            exposure: d.exposure,
            direction: d.direction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorrelateSection {
    /// Proxies to correlate against; empty means every proxy with data.
    pub proxies: Vec<Proxy>,
}

impl Default for CorrelateSection {
    fn default() -> Self {
        CorrelateSection { proxies: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelChoice {
    #[default]
    IndependentCascade,
    Reachability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetMode {
    /// Every strategy removes `|combined union|` nodes.
    #[default]
    Equal,
    /// Each union keeps its natural size; random matches the combined one.
    Union,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSection {
    pub enabled: bool,
    pub model: ModelChoice,
    pub p: f64,
    pub trials: usize,
    pub weighted: bool,
    /// Originator labels; when empty, `seed_count` nodes are drawn.
    pub seeds: Vec<String>,
    pub seed_count: usize,
    pub budget: BudgetMode,
}

impl Default for SimulateSection {
    fn default() -> Self {
        SimulateSection {
            enabled: false,
            model: ModelChoice::IndependentCascade,
            p: 0.1,
            trials: 1000,
            weighted: false,
            seeds: Vec::new(),
            seed_count: 20,
            budget: BudgetMode::Equal,
        }
    }
}

/// Everything that determines a run except the output directory. Relative
/// paths resolve against the working directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input: PathBuf,
    pub format: InputFormat,
    /// Orientation of the input rows (edges) or of the built graph (interactions).
    pub direction: Direction,
    pub metrics: Vec<Metric>,
    pub k: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attributes: Option<PathBuf>,
    /// Also write `venn_regions.csv` and `topk_bars.csv`.
    pub plots: bool,
    pub degree: DegreeSection,
    pub closeness: ClosenessSection,
    pub betweenness: BetweennessSection,
    pub eigenvector: PowerIterationConfig,
    pub pc: PcConfig,
    pub mvc: MvcSection,
    pub dic: DicConfig,
    pub correlate: CorrelateSection,
    pub simulate: SimulateSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: PathBuf::new(),
            format: InputFormat::Interactions,
            direction: Direction::InfoFlow,
            metrics: Metric::DEFAULT_SET.to_vec(),
            k: crate::rank::DEFAULT_K,
            seed: 0,
            attributes: None,
            plots: false,
            degree: DegreeSection::default(),
            closeness: ClosenessSection::default(),
            betweenness: BetweennessSection::default(),
            eigenvector: PowerIterationConfig::default(),
            pc: PcConfig::default(),
            mvc: MvcSection::default(),
            dic: DicConfig::default(),
            correlate: CorrelateSection::default(),
            simulate: SimulateSection::default(),
        }
    }
}

impl RunConfig {
    /// Loads TOML, or JSON when the file ends in `.json` (e.g. a report's
    /// `config` object saved on its own).
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let parsed = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|message| Error::Config {
            path: path.to_owned(),
            message,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::invalid(format!("config not representable as TOML: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.input.as_os_str().is_empty() {
            return Err(Error::invalid("no input file given"));
        }
        if self.k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if self.metrics.is_empty() {
            return Err(Error::invalid("no metrics requested"));
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(dup) = self.metrics.iter().find(|m| !seen.insert(**m)) {
            return Err(Error::invalid(format!("metric `{dup}` requested twice")));
        }
        if self.mvc.init == MvcInitChoice::Attribute && self.attributes.is_none() && self.metrics.contains(&Metric::Mvc) {
            return Err(Error::invalid("mvc init `attribute` needs an attributes file"));
        }
        self.eigenvector.validate()?;
        self.pc.validate()?;
        if self.simulate.enabled {
            self.cascade_model().validate()?;
            if self.simulate.seeds.is_empty() && self.simulate.seed_count == 0 {
                return Err(Error::invalid("simulation needs seeds or a positive seed_count"));
            }
        }
        Ok(())
    }

    fn cascade_model(&self) -> CascadeModel {
        match self.simulate.model {
            ModelChoice::IndependentCascade => CascadeModel::IndependentCascade {
                p: self.simulate.p,
                trials: self.simulate.trials,
                seed: self.seed,
                weighted: self.simulate.weighted,
            },
            ModelChoice::Reachability => CascadeModel::Reachability,
        }
    }

    fn mvc_config(&self) -> MvcConfig {
        MvcConfig {
            init: match self.mvc.init {
                MvcInitChoice::SeededUniform => MvcInit::SeededUniform { seed: self.seed },
                MvcInitChoice::Attribute => MvcInit::Attribute,
            },
            steps: self.mvc.steps,
            exposure: self.mvc.exposure,
            direction: self.mvc.direction,
        }
    }

    fn betweenness_mode(&self, n: usize) -> Result<BetweennessMode> {
        let auto = BetweennessMode::auto(n, self.seed);
        Ok(match (self.betweenness.mode, self.betweenness.samples) {
            (BetweennessChoice::Auto, _) => auto,
            (BetweennessChoice::Exact, _) => BetweennessMode::Exact,
            (BetweennessChoice::Sampled, Some(k)) => BetweennessMode::Sampled { k, seed: self.seed },
            (BetweennessChoice::Sampled, None) => match auto {
                BetweennessMode::Sampled { .. } => auto,
                BetweennessMode::Exact => BetweennessMode::Sampled {
                    k: n.min(256),
                    seed: self.seed,
                },
            },
        })
    }
}

pub fn load_graph(input: &Path, format: InputFormat, direction: Direction) -> Result<DirectedGraph> {
    match format {
        InputFormat::Interactions => build_graph(&io::read_interactions(input)?, direction),
        InputFormat::Edges => io::read_edge_list(input, direction),
    }
}

/// Computes one metric under the run's settings.
pub fn compute_metric(
    g: &DirectedGraph,
    metric: Metric,
    cfg: &RunConfig,
    attrs: Option<&NodeAttributes>,
) -> Result<ScoreVector> {
    match metric {
        Metric::DegreeIn | Metric::DegreeOut | Metric::DegreeTotal => {
            let mode = metric.degree_mode().expect("degree metric");
            let view = g.oriented(cfg.degree.direction);
            let mut sv = degree_centrality(&view, mode);
            sv.metric = metric;
            Ok(sv)
        }
        Metric::Closeness => Ok(closeness_centrality_with(
            &g.oriented(cfg.closeness.direction),
            cfg.closeness.distance,
        )),
        Metric::Betweenness => betweenness_centrality(
            &g.oriented(Direction::InfoFlow),
            cfg.betweenness_mode(g.node_count())?,
            cfg.betweenness.distance,
        ),
        Metric::Eigenvector => eigenvector_centrality(g, cfg.eigenvector),
        Metric::Pc => propagation_centrality(g, &cfg.pc),
        Metric::Mvc => mvc(g, attrs, &cfg.mvc_config()),
        Metric::Dic => dic(g, &cfg.dic),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub dropped_self_loops: usize,
    pub convention: Direction,
}

impl GraphSummary {
    pub fn of(g: &DirectedGraph) -> Self {
        GraphSummary {
            nodes: g.node_count(),
            edges: g.edge_count(),
            dropped_self_loops: g.dropped_self_loops(),
            convention: g.convention(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub metric: Metric,
    pub params: Params,
    pub iterations_run: usize,
    pub normalised: bool,
    pub top_k: Vec<RankEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterventionSummary {
    pub strategy: String,
    pub budget: usize,
    pub result: InterventionResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

/// The consolidated run report. Timings are wall-clock and vary between
/// runs, so they are written to `timings.json` rather than `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub graph: GraphSummary,
    pub metrics: Vec<MetricSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlap: Option<OverlapReport>,
    #[serde(default)]
    pub correlations: Vec<CorrelationResult>,
    #[serde(default)]
    pub interventions: Vec<InterventionSummary>,
    #[serde(skip)]
    pub timings: Vec<StageTiming>,
}

impl AnalysisReport {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_owned(),
            source,
        })
    }

    /// Rankings as recorded in the report.
    pub fn rankings(&self) -> Vec<RankingTable> {
        self.metrics
            .iter()
            .map(|m| RankingTable {
                metric: m.metric,
                k: self.config.k,
                entries: m.top_k.clone(),
            })
            .collect()
    }
}

struct Clock(Vec<StageTiming>);

impl Clock {
    fn time<T>(&mut self, stage: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f().map_err(|e| e.in_stage(stage));
        self.0.push(StageTiming {
            stage: stage.to_owned(),
            seconds: start.elapsed().as_secs_f64(),
        });
        if out.is_ok() {
            log::info!("{stage}: {:.3}s", start.elapsed().as_secs_f64());
        }
        out
    }
}

/// Overlap over the given rankings, or `None` when there are fewer than two
/// or none of them is traditional.
pub fn overlap_if_meaningful(rankings: &[RankingTable]) -> Result<Option<OverlapReport>> {
    let traditional: Vec<Metric> = rankings.iter().map(|r| r.metric).filter(|m| m.is_traditional()).collect();
    if rankings.len() < 2 || traditional.is_empty() {
        return Ok(None);
    }
    overlap_report(rankings, &traditional).map(Some)
}

/// Correlations of every score vector against the requested proxies (or
/// every proxy with at least one value).
pub fn correlate_all(
    scores: &[ScoreVector],
    attrs: &NodeAttributes,
    proxies: &[Proxy],
) -> Result<Vec<CorrelationResult>> {
    let proxies: Vec<Proxy> = if proxies.is_empty() {
        [Proxy::Vulnerability, Proxy::RetweetCount, Proxy::EmotionWordCount]
            .into_iter()
            .filter(|&p| attrs.get(p).iter().any(Option::is_some))
            .collect()
    } else {
        proxies.to_vec()
    };
    let mut out = Vec::new();
    for sv in scores {
        for &p in &proxies {
            out.push(rank_correlation(sv, attrs, p)?);
        }
    }
    Ok(out)
}

fn originators(g: &DirectedGraph, sim: &SimulateSection, seed: u64) -> Result<Vec<NodeId>> {
    if !sim.seeds.is_empty() {
        return sim
            .seeds
            .iter()
            .map(|l| g.node_by_label(l).ok_or_else(|| Error::UnknownLabel(l.clone())))
            .collect();
    }
    let count = sim.seed_count.min(g.node_count());
    let mut rng = stream_rng(seed, "originators");
    let mut picked = sample(&mut rng, g.node_count(), count).into_vec();
    picked.sort_unstable();
    Ok(picked)
}

/// Removal experiments for the traditional union (when any traditional
/// metric is present), the combined union and a random set.
pub fn run_interventions(
    g: &DirectedGraph,
    scores: &[ScoreVector],
    cfg: &RunConfig,
) -> Result<Vec<InterventionSummary>> {
    let deep: Vec<RankingTable> = scores
        .iter()
        .map(|sv| top_k(sv, (cfg.k * scores.len()).min(sv.len())))
        .collect::<Result<_>>()?;
    let cut = |tables: &[RankingTable]| -> Vec<RankingTable> {
        tables
            .iter()
            .map(|t| RankingTable {
                metric: t.metric,
                k: cfg.k,
                entries: t.entries.iter().take(cfg.k).cloned().collect(),
            })
            .collect()
    };
    let top = cut(&deep);
    let combined = removal_order(g, &top, &RemovalStrategy::CombinedUnion)?;
    let budget = combined.len();

    let mut plans: Vec<(String, Vec<NodeId>)> = Vec::new();
    if top.iter().any(|t| t.metric.is_traditional()) {
        let set = match cfg.simulate.budget {
            BudgetMode::Equal => {
                equal_budget(&removal_order(g, &deep, &RemovalStrategy::TraditionalUnion)?, budget)
            }
            BudgetMode::Union => removal_order(g, &top, &RemovalStrategy::TraditionalUnion)?,
        };
        plans.push((RemovalStrategy::TraditionalUnion.name(), set));
    }
    plans.push((RemovalStrategy::CombinedUnion.name(), combined));
    let random = RemovalStrategy::Random { k: budget, seed: cfg.seed };
    plans.push((random.name(), removal_order(g, &[], &random)?));

    let cascade = CascadeConfig {
        model: cfg.cascade_model(),
        seeds: originators(g, &cfg.simulate, cfg.seed)?,
    };
    plans
        .into_iter()
        .map(|(strategy, set)| {
            Ok(InterventionSummary {
                strategy,
                budget: set.len(),
                result: intervention_experiment(g, &set, &cascade)?,
            })
        })
        .collect()
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|source| Error::Json {
        path: PathBuf::from("<memory>"),
        source,
    })?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    io::write_atomic(path, &json_bytes(value)?)
}

pub fn scores_file_name(metric: Metric) -> String {
    format!("{}.scores.csv", metric.id())
}

/// Runs every stage and writes `<metric>.scores.csv`, `overlap.json` (when
/// there is an overlap), `report.json` and `timings.json` under `out_dir`.
pub fn run_pipeline(cfg: &RunConfig, out_dir: &Path) -> Result<AnalysisReport> {
    cfg.validate()?;
    let mut clock = Clock(Vec::new());

    let g = clock.time("ingest", || load_graph(&cfg.input, cfg.format, cfg.direction))?;
    log::info!("graph: {} nodes, {} edges", g.node_count(), g.edge_count());
    let attrs = match &cfg.attributes {
        Some(path) => Some(clock.time("attributes", || io::read_attributes(path, g.labels()))?),
        None => None,
    };

    let scores: Vec<ScoreVector> = clock.time("compute", || {
        cfg.metrics
            .iter()
            .map(|&m| {
                let start = Instant::now();
                let sv = compute_metric(&g, m, cfg, attrs.as_ref())?;
                log::info!("  {m}: {:.3}s", start.elapsed().as_secs_f64());
                Ok(sv)
            })
            .collect()
    })?;

    let rankings: Vec<RankingTable> =
        clock.time("top_k", || scores.iter().map(|sv| top_k(sv, cfg.k)).collect())?;
    let overlap = clock.time("overlap", || overlap_if_meaningful(&rankings))?;
    let correlations = match &attrs {
        Some(a) => clock.time("correlate", || correlate_all(&scores, a, &cfg.correlate.proxies))?,
        None => Vec::new(),
    };
    let interventions = if cfg.simulate.enabled {
        clock.time("simulate", || run_interventions(&g, &scores, cfg))?
    } else {
        Vec::new()
    };

    let report = AnalysisReport {
        tool: TOOL_NAME.to_owned(),
        version: VERSION.to_owned(),
        config: cfg.clone(),
        graph: GraphSummary::of(&g),
        metrics: scores
            .iter()
            .zip(&rankings)
            .map(|(sv, r)| MetricSummary {
                metric: sv.metric,
                params: sv.params.clone(),
                iterations_run: sv.iterations_run,
                normalised: sv.normalised,
                top_k: r.entries.clone(),
            })
            .collect(),
        overlap,
        correlations,
        interventions,
        timings: Vec::new(),
    };

    clock.time("write", || {
        std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        for sv in &scores {
            io::write_atomic(&out_dir.join(scores_file_name(sv.metric)), io::scores_csv(sv).as_bytes())?;
        }
        if let Some(o) = &report.overlap {
            write_json(&out_dir.join("overlap.json"), o)?;
        }
        write_json(&out_dir.join("report.json"), &report)?;
        if cfg.plots && report.overlap.is_some() {
            emit_plot_data(&report, out_dir)?;
        }
        Ok(())
    })?;

    let mut report = report;
    report.timings = clock.0;
    write_json(&out_dir.join("timings.json"), &report.timings)?;
    Ok(report)
}

/// Writes `venn_regions.csv` (`region,count`) and `topk_bars.csv`
/// (`metric,rank,node,score`).
pub fn emit_plot_data(report: &AnalysisReport, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let overlap = report.overlap.as_ref().ok_or(Error::NothingToEmit)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let mut venn = String::from("region,count\n");
    for r in &overlap.regions {
        venn.push_str(&format!("{},{}\n", r.label(), r.count));
    }
    let mut bars = String::from("metric,rank,node,score\n");
    for m in &report.metrics {
        for e in &m.top_k {
            bars.push_str(&format!("{},{},{},{}\n", m.metric.id(), e.rank, csv_field(&e.node), e.score));
        }
    }
    let paths = vec![out_dir.join("venn_regions.csv"), out_dir.join("topk_bars.csv")];
    io::write_atomic(&paths[0], venn.as_bytes())?;
    io::write_atomic(&paths[1], bars.as_bytes())?;
    Ok(paths)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}
