//! C ABI over the spreadrank graph and metric routines.
//!
//! Graphs live behind an opaque `SrGraph` handle created by one of the
//! `sr_graph_from_*` constructors and released with [`sr_graph_free`].
//! Every fallible call returns an [`SrStatus`]; on failure a description is
//! available from [`sr_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use spreadrank::centrality::Metric;
use spreadrank::pipeline::{compute_metric, RunConfig};
use spreadrank::sim::{spread_volume, CascadeConfig, CascadeModel};
use spreadrank::{io, DegreeMode, Direction, DirectedGraph, Error};

/// Opaque graph handle.
pub struct SrGraph {
    inner: DirectedGraph,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    IoError = 4,
    BufferTooSmall = 5,
    ComputationError = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrDirection {
    /// Edges point from author to resharer.
    InfoFlow = 0,
    /// Edges point from resharer to author.
    Endorsement = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrDegreeMode {
    In = 0,
    Out = 1,
    Total = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrMetric {
    DegreeIn = 0,
    DegreeOut = 1,
    DegreeTotal = 2,
    Closeness = 3,
    Betweenness = 4,
    Eigenvector = 5,
    Pc = 6,
    Mvc = 7,
    Dic = 8,
}

impl From<SrDirection> for Direction {
    fn from(d: SrDirection) -> Self {
        match d {
            SrDirection::InfoFlow => Direction::InfoFlow,
            SrDirection::Endorsement => Direction::Endorsement,
        }
    }
}

impl From<SrDegreeMode> for DegreeMode {
    fn from(m: SrDegreeMode) -> Self {
        match m {
            SrDegreeMode::In => DegreeMode::In,
            SrDegreeMode::Out => DegreeMode::Out,
            SrDegreeMode::Total => DegreeMode::Total,
        }
    }
}

impl From<SrMetric> for Metric {
    fn from(m: SrMetric) -> Self {
        match m {
            SrMetric::DegreeIn => Metric::DegreeIn,
            SrMetric::DegreeOut => Metric::DegreeOut,
            SrMetric::DegreeTotal => Metric::DegreeTotal,
            SrMetric::Closeness => Metric::Closeness,
            SrMetric::Betweenness => Metric::Betweenness,
            SrMetric::Eigenvector => Metric::Eigenvector,
            SrMetric::Pc => Metric::Pc,
            SrMetric::Mvc => Metric::Mvc,
            SrMetric::Dic => Metric::Dic,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(SrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } | Error::Config { .. } | Error::Json { .. } => SrStatus::ParseError,
            Error::Io { .. } => SrStatus::IoError,
            Error::InvalidParameter(_) | Error::InvalidNode(_) | Error::UnknownLabel(_) | Error::EmptyInput => {
                SrStatus::InvalidArgument
            }
            _ => SrStatus::ComputationError,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: SrStatus, msg: &str) -> Failure {
    Failure(status, msg.to_owned())
}

/// Runs `f`, recording any error or panic for [`sr_last_error_message`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SrStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SrStatus::Panic
        }
    }
}

unsafe fn graph_ref<'a>(g: *const SrGraph) -> Result<&'a DirectedGraph, Failure> {
    g.as_ref().map(|h| &h.inner).ok_or_else(|| fail(SrStatus::NullPointer, "graph handle is null"))
}

unsafe fn slice<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(fail(SrStatus::NullPointer, &format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

fn publish(g: DirectedGraph, out: *mut *mut SrGraph) {
    let handle = Box::into_raw(Box::new(SrGraph { inner: g }));
    // SAFETY: callers check `out` for null before building the graph.
    unsafe { *out = handle };
}

/// Builds a graph over nodes `0..n_nodes` (labelled `"0"`, `"1"`, ...) from
/// parallel `src`/`dst` arrays. `weights` may be null for unit weights.
/// Parallel edges are summed and self-loops dropped.
///
/// # Safety
/// `src` and `dst` must point to `n_edges` readable values, `weights` to
/// `n_edges` values or be null, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_graph_from_edges(
    n_nodes: usize,
    src: *const u32,
    dst: *const u32,
    weights: *const f64,
    n_edges: usize,
    stored_as: SrDirection,
    out: *mut *mut SrGraph,
) -> SrStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(SrStatus::NullPointer, "out is null"));
        }
        let src = slice(src, n_edges, "src")?;
        let dst = slice(dst, n_edges, "dst")?;
        let weights = if weights.is_null() { None } else { Some(slice(weights, n_edges, "weights")?) };
        let edges = (0..n_edges).map(|i| (src[i] as usize, dst[i] as usize, weights.map_or(1.0, |w| w[i])));
        let labels = (0..n_nodes).map(|i| i.to_string()).collect();
        let g = DirectedGraph::from_weighted_edges(labels, edges, stored_as.into())?;
        publish(g, out);
        Ok(())
    })
}

/// Reads a `src,dst,weight` CSV. Node ids follow label order (numeric
/// labels numerically), as reported by [`sr_graph_label`].
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_graph_from_edge_list_csv(
    path: *const c_char,
    stored_as: SrDirection,
    out: *mut *mut SrGraph,
) -> SrStatus {
    guard(|| {
        if path.is_null() || out.is_null() {
            return Err(fail(SrStatus::NullPointer, "path or out is null"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| fail(SrStatus::InvalidArgument, "path is not UTF-8"))?;
        let g = io::read_edge_list(Path::new(path), stored_as.into())?;
        publish(g, out);
        Ok(())
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `g` must come from an `sr_graph_from_*` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sr_graph_free(g: *mut SrGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_graph_node_count(g: *const SrGraph, out: *mut usize) -> SrStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let out = out.as_mut().ok_or_else(|| fail(SrStatus::NullPointer, "out is null"))?;
        *out = g.node_count();
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_graph_edge_count(g: *const SrGraph, out: *mut usize) -> SrStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let out = out.as_mut().ok_or_else(|| fail(SrStatus::NullPointer, "out is null"))?;
        *out = g.edge_count();
        Ok(())
    })
}

/// Copies the label of `node` into `buf` with a trailing NUL. `needed`
/// (optional) receives the required size including the NUL; a short buffer
/// yields `BufferTooSmall`.
///
/// # Safety
/// `g` must be a live handle, `buf` writable for `buf_len` bytes (or null
/// when `buf_len` is 0), `needed` writable or null.
#[no_mangle]
pub unsafe extern "C" fn sr_graph_label(
    g: *const SrGraph,
    node: usize,
    buf: *mut c_char,
    buf_len: usize,
    needed: *mut usize,
) -> SrStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if node >= g.node_count() {
            return Err(Error::InvalidNode(node).into());
        }
        let label = g.label(node).as_bytes();
        if let Some(n) = needed.as_mut() {
            *n = label.len() + 1;
        }
        if buf_len < label.len() + 1 {
            return Err(fail(SrStatus::BufferTooSmall, "label buffer too small"));
        }
        if buf.is_null() {
            return Err(fail(SrStatus::NullPointer, "buf is null"));
        }
        std::ptr::copy_nonoverlapping(label.as_ptr(), buf.cast::<u8>(), label.len());
        *buf.add(label.len()) = 0;
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_degree(g: *const SrGraph, node: usize, mode: SrDegreeMode, out: *mut usize) -> SrStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let out = out.as_mut().ok_or_else(|| fail(SrStatus::NullPointer, "out is null"))?;
        *out = g.degree(node, mode.into())?;
        Ok(())
    })
}

/// Computes `metric` with default parameters into `out`, indexed by node
/// id. `seed` drives the stochastic parts (MVC initial vulnerability,
/// sampled betweenness on large graphs). `out_len` must be at least the
/// node count.
///
/// # Safety
/// `g` must be a live handle and `out` writable for `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sr_compute_metric(
    g: *const SrGraph,
    metric: SrMetric,
    seed: u64,
    out: *mut f64,
    out_len: usize,
) -> SrStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if out.is_null() {
            return Err(fail(SrStatus::NullPointer, "out is null"));
        }
        if out_len < g.node_count() {
            return Err(fail(SrStatus::BufferTooSmall, "output buffer shorter than node count"));
        }
        let cfg = RunConfig {
            seed,
            ..RunConfig::default()
        };
        let sv = compute_metric(g, metric.into(), &cfg, None)?;
        std::ptr::copy_nonoverlapping(sv.scores.as_ptr(), out, sv.scores.len());
        Ok(())
    })
}

/// Expected cascade size from `seeds`, following info-flow edges. With
/// `trials == 0` the deterministic reachability count is returned;
/// otherwise an independent cascade with edge probability `p` is averaged
/// over `trials` runs.
///
/// # Safety
/// `g` must be a live handle, `seeds` readable for `n_seeds` values and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_spread_volume(
    g: *const SrGraph,
    seeds: *const usize,
    n_seeds: usize,
    p: f64,
    trials: usize,
    seed: u64,
    out: *mut f64,
) -> SrStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let out = out.as_mut().ok_or_else(|| fail(SrStatus::NullPointer, "out is null"))?;
        let model = if trials == 0 {
            CascadeModel::Reachability
        } else {
            CascadeModel::IndependentCascade {
                p,
                trials,
                seed,
                weighted: false,
            }
        };
        let cfg = CascadeConfig {
            model,
            seeds: slice(seeds, n_seeds, "seeds")?.to_vec(),
        };
        *out = spread_volume(g, &cfg)?;
        Ok(())
    })
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
