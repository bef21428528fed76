use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spreadrank::centrality::{Metric, Proxy, ScoreVector};
use spreadrank::pipeline::{
    self, compute_metric, correlate_all, emit_plot_data, load_graph, overlap_if_meaningful, run_interventions,
    scores_file_name, write_json, AnalysisReport, BudgetMode, GraphSummary, InputFormat, ModelChoice, MvcInitChoice,
    RunConfig,
};
use spreadrank::rank::{top_k, RankingTable};
use spreadrank::{io, Direction, Error, Result};

#[derive(Parser)]
#[command(name = "spreadrank", version, about = "Centrality rankings and removal experiments on reshare graphs")]
struct Cli {
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the graph and export it as a sorted edge list.
    Ingest {
        #[command(flatten)]
        graph: GraphArgs,
        /// Edge-list CSV to write (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute metric scores into `<metric>.scores.csv` files.
    Compute {
        #[command(flatten)]
        opts: RunArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Top-k overlap of score files.
    Compare {
        /// `<metric>.scores.csv` files.
        #[arg(long, num_args = 1.., required = true)]
        scores: Vec<PathBuf>,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Directory for `overlap.json` and the plot tables.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spearman correlation of score files against node attributes.
    Correlate {
        #[arg(long, num_args = 1.., required = true)]
        scores: Vec<PathBuf>,
        #[arg(long)]
        attributes: PathBuf,
        /// vulnerability, retweet_count or emotion_word_count (all with data when omitted).
        #[arg(long = "proxy")]
        proxies: Vec<Proxy>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Node-removal experiments driven by score files.
    Simulate {
        #[command(flatten)]
        opts: RunArgs,
        #[arg(long, num_args = 1.., required = true)]
        scores: Vec<PathBuf>,
        /// JSON file for the results (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full pipeline.
    Run {
        #[command(flatten)]
        opts: RunArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Also write the plot tables.
        #[arg(long)]
        plots: bool,
    },
    /// Venn region and top-k bar tables from a report.
    EmitPlots {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "interactions")]
    format: InputFormat,
    #[arg(long, default_value = "info-flow")]
    direction: Direction,
}

/// Flags layered over an optional config file; flags win.
#[derive(Args)]
struct RunArgs {
    /// TOML (or JSON) run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    format: Option<InputFormat>,
    #[arg(long)]
    direction: Option<Direction>,
    /// Comma-separated metric names.
    #[arg(long, value_delimiter = ',')]
    metrics: Option<Vec<Metric>>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Node attribute CSV.
    #[arg(long)]
    attributes: Option<PathBuf>,
    #[arg(long)]
    pc_damping: Option<f64>,
    #[arg(long)]
    mvc_steps: Option<u32>,
    /// seeded_uniform or attribute.
    #[arg(long)]
    mvc_init: Option<MvcInitChoice>,
    #[arg(long)]
    dic_steps: Option<u32>,
    #[arg(long)]
    ic_p: Option<f64>,
    #[arg(long)]
    ic_trials: Option<usize>,
    /// Run removal experiments in `run`.
    #[arg(long)]
    simulate: bool,
    /// Use deterministic reachability instead of independent cascade.
    #[arg(long)]
    reachability: bool,
    /// Originator labels, comma-separated.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<String>>,
    /// Number of random originators when no labels are given.
    #[arg(long)]
    seed_count: Option<usize>,
    /// Give each strategy its natural union size instead of an equal budget.
    #[arg(long)]
    unequal_budget: bool,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($flag:expr => $($field:tt)+) => {
                if let Some(v) = $flag.clone() {
                    cfg.$($field)+ = v;
                }
            };
        }
        set!(self.input => input);
        set!(self.format => format);
        set!(self.direction => direction);
        set!(self.metrics => metrics);
        set!(self.k => k);
        set!(self.seed => seed);
        set!(self.pc_damping => pc.damping);
        set!(self.mvc_steps => mvc.steps);
        set!(self.mvc_init => mvc.init);
        set!(self.dic_steps => dic.steps);
        set!(self.ic_p => simulate.p);
        set!(self.ic_trials => simulate.trials);
        set!(self.seeds => simulate.seeds);
        set!(self.seed_count => simulate.seed_count);
        if self.attributes.is_some() {
            cfg.attributes = self.attributes.clone();
        }
        if self.simulate {
            cfg.simulate.enabled = true;
        }
        if self.reachability {
            cfg.simulate.model = ModelChoice::Reachability;
        }
        if self.unequal_budget {
            cfg.simulate.budget = BudgetMode::Union;
        }
        Ok(cfg)
    }
}

fn read_score_files(paths: &[PathBuf]) -> Result<Vec<ScoreVector>> {
    paths.iter().map(|p| io::read_scores(p, None)).collect()
}

fn rankings(scores: &[ScoreVector], k: usize) -> Result<Vec<RankingTable>> {
    scores.iter().map(|sv| top_k(sv, k)).collect()
}

fn print_json<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_json(path, value),
        None => {
            let text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
                path: "<stdout>".into(),
                source,
            })?;
            println!("{text}");
            Ok(())
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Ingest { graph, out } => {
            let g = load_graph(&graph.input, graph.format, graph.direction)?;
            let csv = io::edge_list_csv(&g);
            match out {
                Some(path) => {
                    io::write_atomic(&path, csv.as_bytes())?;
                    print_json(&GraphSummary::of(&g), None)?;
                }
                None => print!("{csv}"),
            }
        }
        Command::Compute { opts, out } => {
            let cfg = opts.resolve()?;
            cfg.validate()?;
            let g = load_graph(&cfg.input, cfg.format, cfg.direction)?;
            let attrs = cfg.attributes.as_ref().map(|p| io::read_attributes(p, g.labels())).transpose()?;
            std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
            for &m in &cfg.metrics {
                let sv = compute_metric(&g, m, &cfg, attrs.as_ref())?;
                let path = out.join(scores_file_name(m));
                io::write_atomic(&path, io::scores_csv(&sv).as_bytes())?;
                println!("{}", path.display());
            }
        }
        Command::Compare { scores, k, out } => {
            if k == 0 {
                return Err(Error::invalid("k must be at least 1"));
            }
            let tables = rankings(&read_score_files(&scores)?, k)?;
            let overlap = overlap_if_meaningful(&tables)?.ok_or_else(|| {
                Error::invalid("compare needs at least two score files including a traditional metric")
            })?;
            for r in &overlap.regions {
                println!("{}\t{}\t{}", r.label(), r.count, r.nodes.join(" "));
            }
            println!(
                "traditional union {}, combined union {}, coverage gain {:.2}%",
                overlap.union_traditional.len(),
                overlap.union_all.len(),
                overlap.coverage_gain_pct
            );
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                write_json(&dir.join("overlap.json"), &overlap)?;
            }
        }
        Command::Correlate {
            scores,
            attributes,
            proxies,
            out,
        } => {
            let scores = read_score_files(&scores)?;
            let attrs = io::read_attributes(&attributes, &scores[0].labels)?;
            // Score files may list nodes in different orders.
            let mut results = Vec::new();
            for sv in &scores {
                let aligned = if sv.labels == scores[0].labels {
                    attrs.clone()
                } else {
                    io::read_attributes(&attributes, &sv.labels)?
                };
                results.extend(correlate_all(std::slice::from_ref(sv), &aligned, &proxies)?);
            }
            print_json(&results, out.as_deref())?;
        }
        Command::Simulate { opts, scores, out } => {
            let mut cfg = opts.resolve()?;
            cfg.simulate.enabled = true;
            cfg.validate()?;
            let g = load_graph(&cfg.input, cfg.format, cfg.direction)?;
            let scores = read_score_files(&scores)?;
            let aligned = scores
                .iter()
                .map(|sv| align_to_graph(sv, &g))
                .collect::<Result<Vec<_>>>()?;
            print_json(&run_interventions(&g, &aligned, &cfg)?, out.as_deref())?;
        }
        Command::Run { opts, out, plots } => {
            let mut cfg = opts.resolve()?;
            cfg.plots |= plots;
            let report = pipeline::run_pipeline(&cfg, &out)?;
            println!("{}", out.join("report.json").display());
            if let Some(o) = &report.overlap {
                println!(
                    "traditional union {}, combined union {}, coverage gain {:.2}%",
                    o.union_traditional.len(),
                    o.union_all.len(),
                    o.coverage_gain_pct
                );
            }
        }
        Command::EmitPlots { report, out } => {
            let report = AnalysisReport::from_json_file(&report)?;
            for path in emit_plot_data(&report, &out)? {
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

/// Reorders a score file's entries onto the graph's node ids.
fn align_to_graph(sv: &ScoreVector, g: &spreadrank::DirectedGraph) -> Result<ScoreVector> {
    let mut scores = vec![f64::NEG_INFINITY; g.node_count()];
    for (label, &s) in sv.labels.iter().zip(&sv.scores) {
        let v = g.node_by_label(label).ok_or_else(|| Error::UnknownLabel(label.clone()))?;
        scores[v] = s;
    }
    if let Some(v) = scores.iter().position(|s| *s == f64::NEG_INFINITY) {
        return Err(Error::invalid(format!("score file for {} has no entry for `{}`", sv.metric, g.label(v))));
    }
    Ok(ScoreVector::new(sv.metric, g.labels().clone(), scores))
}

fn report_error(e: &Error) {
    eprintln!("error: {e}");
    let mut source = std::error::Error::source(e);
    while let Some(s) = source {
        // Stage errors already print their cause inline.
        if !matches!(e, Error::Stage { .. }) {
            eprintln!("  caused by: {s}");
        }
        source = s.source();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match std::panic::catch_unwind(|| execute(cli.command)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            report_error(&e);
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => {
            eprintln!("error: internal failure");
            ExitCode::from(3)
        }
    }
}
