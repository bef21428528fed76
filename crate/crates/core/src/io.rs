//! CSV ingestion and export.
//!
//! - interactions: `actor,target,kind,timestamp,weight` (only `actor` and
//!   `target` required), `#` comment lines ignored
//! - edge list: `src,dst,weight` (weight optional)
//! - scores: `node_label,score`, descending score then ascending label
//! - attributes: `node_label` plus any of `vulnerability`, `retweet_count`,
//!   `emotion_word_count`; empty cells mean missing

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use crate::centrality::{Metric, NodeAttributes, ScoreVector};
use crate::error::{Error, Result};
use crate::graph::{graph_from_labelled_edges, DirectedGraph, InteractionKind, InteractionRecord};
use crate::rank::ranked_ids;

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(r)
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

struct Columns {
    names: Vec<String>,
}

impl Columns {
    fn new<R: Read>(rdr: &mut csv::Reader<R>) -> Result<Self> {
        let names = rdr
            .headers()
            .map_err(csv_err)?
            .iter()
            .map(|h| h.trim_start_matches('\u{feff}').to_ascii_lowercase())
            .collect();
        Ok(Columns { names })
    }

    fn find(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.find(name).ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("missing `{name}` column"),
        })
    }
}

fn field<'a>(rec: &'a csv::StringRecord, col: Option<usize>) -> Option<&'a str> {
    col.and_then(|c| rec.get(c)).filter(|s| !s.is_empty())
}

fn parse_num<T: std::str::FromStr>(value: &str, what: &str, line: u64) -> Result<T> {
    value.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} `{value}`"),
    })
}

fn positive_weight(raw: Option<&str>, line: u64) -> Result<Option<f64>> {
    let Some(raw) = raw else { return Ok(None) };
    let w: f64 = parse_num(raw, "weight", line)?;
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::Parse {
            line,
            message: format!("weight must be positive, got {w}"),
        });
    }
    Ok(Some(w))
}

pub fn read_interactions_from<R: Read>(r: R) -> Result<Vec<InteractionRecord>> {
    let mut rdr = reader(r);
    let cols = Columns::new(&mut rdr)?;
    let (actor, target) = (cols.require("actor")?, cols.require("target")?);
    let (kind, ts, weight) = (cols.find("kind"), cols.find("timestamp"), cols.find("weight"));

    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let (Some(a), Some(t)) = (field(&rec, Some(actor)), field(&rec, Some(target))) else {
            return Err(Error::Parse {
                line,
                message: "record is missing actor or target".into(),
            });
        };
        out.push(InteractionRecord {
            actor: a.to_owned(),
            target: t.to_owned(),
            kind: field(&rec, kind).map(InteractionKind::parse_lenient).unwrap_or_default(),
            timestamp: field(&rec, ts).map(|s| parse_num(s, "timestamp", line)).transpose()?,
            weight: positive_weight(field(&rec, weight), line)?,
        });
    }
    Ok(out)
}

pub fn read_interactions(path: &Path) -> Result<Vec<InteractionRecord>> {
    read_interactions_from(open(path)?).map_err(|e| with_path(e, path))
}

pub fn read_edge_list_from<R: Read>(r: R) -> Result<Vec<(String, String, f64)>> {
    let mut rdr = reader(r);
    let cols = Columns::new(&mut rdr)?;
    let (src, dst, weight) = (cols.require("src")?, cols.require("dst")?, cols.find("weight"));
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let (Some(s), Some(d)) = (field(&rec, Some(src)), field(&rec, Some(dst))) else {
            return Err(Error::Parse {
                line,
                message: "edge is missing src or dst".into(),
            });
        };
        let w = positive_weight(field(&rec, weight), line)?.unwrap_or(1.0);
        out.push((s.to_owned(), d.to_owned(), w));
    }
    Ok(out)
}

/// Reads an edge-list CSV whose rows follow `stored_as`.
pub fn read_edge_list(path: &Path, stored_as: crate::graph::Direction) -> Result<DirectedGraph> {
    let edges = read_edge_list_from(open(path)?).map_err(|e| with_path(e, path))?;
    graph_from_labelled_edges(&edges, stored_as)
}

/// Edge list sorted by `(src, dst)` id order, full-precision weights.
pub fn edge_list_csv(g: &DirectedGraph) -> String {
    let mut s = String::from("src,dst,weight\n");
    for (u, v, w) in g.edges() {
        s.push_str(&format!("{},{},{}\n", quote(g.label(u)), quote(g.label(v)), w));
    }
    s
}

fn quote(field: &str) -> std::borrow::Cow<'_, str> {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\"")).into()
    } else {
        field.into()
    }
}

pub fn scores_csv(sv: &ScoreVector) -> String {
    let mut s = String::from("node_label,score\n");
    for v in ranked_ids(sv) {
        s.push_str(&format!("{},{}\n", quote(&sv.labels[v]), sv.scores[v]));
    }
    s
}

pub fn read_scores_from<R: Read>(r: R, metric: Metric) -> Result<ScoreVector> {
    let mut rdr = reader(r);
    let cols = Columns::new(&mut rdr)?;
    let (label, score) = (cols.require("node_label")?, cols.require("score")?);
    let (mut labels, mut scores) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let l = field(&rec, Some(label)).ok_or_else(|| Error::Parse {
            line,
            message: "missing node_label".into(),
        })?;
        let v: f64 = parse_num(field(&rec, Some(score)).unwrap_or(""), "score", line)?;
        if !v.is_finite() {
            return Err(Error::Parse {
                line,
                message: "score must be finite".into(),
            });
        }
        labels.push(l.to_owned());
        scores.push(v);
    }
    let labels: Arc<[String]> = labels.into();
    Ok(ScoreVector::new(metric, labels, scores))
}

/// Reads `<metric>.scores.csv`; the metric comes from the file name unless
/// given explicitly.
pub fn read_scores(path: &Path, metric: Option<Metric>) -> Result<ScoreVector> {
    let metric = match metric {
        Some(m) => m,
        None => metric_from_file_name(path)?,
    };
    read_scores_from(open(path)?, metric).map_err(|e| with_path(e, path))
}

pub fn metric_from_file_name(path: &Path) -> Result<Metric> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    let stem = name.strip_suffix(".scores.csv").or_else(|| name.strip_suffix(".csv")).unwrap_or(name);
    stem.parse()
        .map_err(|_| Error::invalid(format!("cannot infer metric from file name `{name}`")))
}

/// Attributes keyed by label, aligned to `labels` (a graph's or a score
/// vector's). Unknown labels are skipped with a warning.
pub fn read_attributes_from<R: Read>(r: R, labels: &[String]) -> Result<NodeAttributes> {
    let mut rdr = reader(r);
    let cols = Columns::new(&mut rdr)?;
    let label = cols.require("node_label")?;
    let columns = [
        cols.find("vulnerability"),
        cols.find("retweet_count"),
        cols.find("emotion_word_count"),
    ];
    let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let mut attrs = NodeAttributes::empty(labels.len());
    let mut unknown = 0usize;
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let Some(l) = field(&rec, Some(label)) else { continue };
        let Some(&v) = index.get(l) else {
            unknown += 1;
            continue;
        };
        let targets = [
            &mut attrs.vulnerability,
            &mut attrs.retweet_count,
            &mut attrs.emotion_word_count,
        ];
        for (col, target) in columns.iter().zip(targets) {
            if let Some(raw) = field(&rec, *col) {
                target[v] = Some(parse_num(raw, "attribute", line)?);
            }
        }
    }
    if unknown > 0 {
        log::warn!("skipped {unknown} attribute row(s) with unknown labels");
    }
    attrs.validate()?;
    Ok(attrs)
}

pub fn read_attributes(path: &Path, labels: &[String]) -> Result<NodeAttributes> {
    read_attributes_from(open(path)?, labels).map_err(|e| with_path(e, path))
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Parse { line, message } => Error::Config {
            path: path.to_owned(),
            message: format!("line {line}: {message}"),
        },
        other => other,
    }
}

/// Writes via a temp file in the same directory and renames it into place,
/// so readers never see a truncated file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
