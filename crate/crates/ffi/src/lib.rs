//! C ABI for pinsync.
//!
//! Graphs are opaque handles created by one of the `pinsync_graph_*`
//! constructors and released with [`pinsync_graph_free`]. Every fallible call
//! returns a [`PinsyncStatus`]; on failure [`pinsync_last_error_message`]
//! describes the most recent error on the calling thread. Node indices are
//! zero-based positions in the handle's node order.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use pinsync::{
    effective_lambda1, load_edge_list, load_edge_list_file, select, simulate, smallest_eigenpair, ChenParams,
    ChenVariant, DynamicsConfig, Error, FailureMask, GenSpec, Graph, GroundedView, PinSet, SelectOptions,
    SolverOptions, StrategyKind,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinsyncStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    IoError = 4,
    NoConvergence = 5,
    InvalidBudget = 6,
    Divergence = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinsyncStrategy {
    Degree = 0,
    Betweenness = 1,
    Bfg = 2,
    Pbo = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinsyncModel {
    Ba = 0,
    Er = 1,
    Ws = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinsyncChenVariant {
    Standard = 0,
    Augmented = 1,
}

/// Parameters for [`pinsync_graph_generate`]. Fields for other models are ignored.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PinsyncGenParams {
    pub model: PinsyncModel,
    pub n: usize,
    pub ba_m: usize,
    pub er_p: f64,
    pub ws_k: usize,
    pub ws_p: f64,
    pub seed: u64,
    /// Nonzero: redraw ER/WS until connected.
    pub require_connected: i32,
}

/// Pinned Chen network settings; fill with [`pinsync_dynamics_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PinsyncDynamics {
    pub c: f64,
    pub gain: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub variant: PinsyncChenVariant,
    pub dt: f64,
    pub t_max: f64,
    pub eps: f64,
    pub init_box: f64,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct PinsyncSimResult {
    /// 1 if the error settled below `eps` before `t_max`.
    pub synced: i32,
    /// Valid when `synced` is 1.
    pub sync_time: f64,
    pub final_error: f64,
}

/// Opaque graph handle.
pub struct PinsyncGraph {
    graph: Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(PinsyncStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } | Error::EmptyInput | Error::Config(_) | Error::Csv(_) => PinsyncStatus::ParseError,
            Error::Io(_) | Error::MissingDataset { .. } => PinsyncStatus::IoError,
            Error::NoConvergence { .. } => PinsyncStatus::NoConvergence,
            Error::InvalidBudget { .. } => PinsyncStatus::InvalidBudget,
            Error::Divergence { .. } => PinsyncStatus::Divergence,
            _ => PinsyncStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn fail<T>(status: PinsyncStatus, msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail(status, msg.into()))
}

/// Runs `f`, recording any error or panic for [`pinsync_last_error_message`].
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PinsyncStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PinsyncStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            PinsyncStatus::Panic
        }
    }
}

unsafe fn graph_ref<'a>(g: *const PinsyncGraph) -> Result<&'a Graph, Fail> {
    match g.as_ref() {
        Some(h) => Ok(&h.graph),
        None => fail(PinsyncStatus::NullPointer, "graph handle is null"),
    }
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return fail(PinsyncStatus::NullPointer, format!("{what} is null"));
    }
    CStr::from_ptr(s).to_str().or_else(|_| fail(PinsyncStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return fail(PinsyncStatus::NullPointer, format!("{what} is null"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn pin_set(graph: &Graph, pins: *const usize, n_pins: usize) -> Result<PinSet, Fail> {
    let members = slice(pins, n_pins, "pins")?.to_vec();
    Ok(PinSet::new(graph, members, "ffi")?)
}

unsafe fn failure_mask(failed: *const u8, n_pins: usize) -> Result<FailureMask, Fail> {
    if failed.is_null() {
        return Ok(FailureMask::none(n_pins));
    }
    let flags = slice(failed, n_pins, "failed")?;
    Ok(FailureMask { beta: flags.iter().map(|&f| f != 0).collect() })
}

unsafe fn write_handle(out: *mut *mut PinsyncGraph, graph: Graph) -> Result<(), Fail> {
    if out.is_null() {
        return fail(PinsyncStatus::NullPointer, "output handle pointer is null");
    }
    *out = Box::into_raw(Box::new(PinsyncGraph { graph }));
    Ok(())
}

/// Parses a whitespace-separated edge list (`#` starts a comment).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pinsync_graph_from_edge_list(
    text: *const c_char,
    out: *mut *mut PinsyncGraph,
) -> PinsyncStatus {
    guard(|| {
        let text = c_str(text, "text")?;
        let (graph, _) = load_edge_list(text.as_bytes())?;
        write_handle(out, graph)
    })
}

/// Reads an edge-list file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pinsync_graph_load(path: *const c_char, out: *mut *mut PinsyncGraph) -> PinsyncStatus {
    guard(|| {
        let path = c_str(path, "path")?;
        let (graph, _) = load_edge_list_file(Path::new(path))?;
        write_handle(out, graph)
    })
}

/// Builds a graph on `n` nodes from `m` edges `(src[i], dst[i])`.
/// Self-loops and duplicates are dropped.
///
/// # Safety
/// `src` and `dst` must hold `m` entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pinsync_graph_from_edges(
    n: usize,
    src: *const usize,
    dst: *const usize,
    m: usize,
    out: *mut *mut PinsyncGraph,
) -> PinsyncStatus {
    guard(|| {
        let src = slice(src, m, "src")?;
        let dst = slice(dst, m, "dst")?;
        let graph = Graph::from_edges(n, src.iter().copied().zip(dst.iter().copied()))?;
        write_handle(out, graph)
    })
}

/// Draws a BA, ER or WS network.
///
/// # Safety
/// `params` must point to a valid struct; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pinsync_graph_generate(
    params: *const PinsyncGenParams,
    out: *mut *mut PinsyncGraph,
) -> PinsyncStatus {
    guard(|| {
        let Some(p) = params.as_ref() else {
            return fail(PinsyncStatus::NullPointer, "params is null");
        };
        let spec = match p.model {
            PinsyncModel::Ba => GenSpec::ba(p.n, p.ba_m, p.seed),
            PinsyncModel::Er => GenSpec::er(p.n, p.er_p, p.seed),
            PinsyncModel::Ws => GenSpec::ws(p.n, p.ws_k, p.ws_p, p.seed),
        };
        let graph = spec.connected(p.require_connected != 0).generate()?;
        write_handle(out, graph)
    })
}

/// Node count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pinsync_graph_node_count(g: *const PinsyncGraph) -> usize {
    g.as_ref().map_or(0, |h| h.graph.node_count())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pinsync_graph_edge_count(g: *const PinsyncGraph) -> usize {
    g.as_ref().map_or(0, |h| h.graph.edge_count())
}

/// Releases a handle. Null is a no-op.
///
/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pinsync_graph_free(g: *mut PinsyncGraph) {
    if !g.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(g))));
    }
}

/// Selects `k` pins. Writes them in selection order to `nodes_out` and, if
/// `lambda_out` is not null, `lambda1` after each pick.
///
/// # Safety
/// `g` must be a live handle; both buffers must hold `capacity` entries.
#[no_mangle]
pub unsafe extern "C" fn pinsync_select(
    g: *const PinsyncGraph,
    strategy: PinsyncStrategy,
    k: usize,
    nodes_out: *mut usize,
    lambda_out: *mut f64,
    capacity: usize,
) -> PinsyncStatus {
    guard(|| {
        let graph = graph_ref(g)?;
        if nodes_out.is_null() {
            return fail(PinsyncStatus::NullPointer, "nodes_out is null");
        }
        if capacity < k {
            return fail(PinsyncStatus::BufferTooSmall, format!("capacity {capacity} is below k={k}"));
        }
        let kind = match strategy {
            PinsyncStrategy::Degree => StrategyKind::Degree,
            PinsyncStrategy::Betweenness => StrategyKind::Betweenness,
            PinsyncStrategy::Bfg => StrategyKind::Bfg,
            PinsyncStrategy::Pbo => StrategyKind::Pbo,
        };
        let trace = select(graph, kind, k, &SelectOptions::default())?;
        for (j, step) in trace.steps.iter().enumerate() {
            *nodes_out.add(j) = step.node;
            if !lambda_out.is_null() {
                *lambda_out.add(j) = step.lambda1;
            }
        }
        Ok(())
    })
}

/// `lambda1` of the grounded Laplacian for the given pins.
///
/// # Safety
/// `g` must be a live handle; `pins` must hold `n_pins` entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pinsync_lambda1(
    g: *const PinsyncGraph,
    pins: *const usize,
    n_pins: usize,
    out: *mut f64,
) -> PinsyncStatus {
    guard(|| {
        let graph = graph_ref(g)?;
        if out.is_null() {
            return fail(PinsyncStatus::NullPointer, "out is null");
        }
        let pins = pin_set(graph, pins, n_pins)?;
        let view = GroundedView::new(graph, &pins)?;
        *out = smallest_eigenpair(&view, &SolverOptions::default())?.lambda1;
        Ok(())
    })
}

/// `lambda1` with the pins flagged in `failed` removed. `failed` holds one
/// byte per pin (nonzero means failed); null means no failures.
///
/// # Safety
/// As for [`pinsync_lambda1`]; `failed` must be null or hold `n_pins` bytes.
#[no_mangle]
pub unsafe extern "C" fn pinsync_effective_lambda1(
    g: *const PinsyncGraph,
    pins: *const usize,
    n_pins: usize,
    failed: *const u8,
    out: *mut f64,
) -> PinsyncStatus {
    guard(|| {
        let graph = graph_ref(g)?;
        if out.is_null() {
            return fail(PinsyncStatus::NullPointer, "out is null");
        }
        let pins = pin_set(graph, pins, n_pins)?;
        let mask = failure_mask(failed, n_pins)?;
        *out = effective_lambda1(graph, &pins, &mask, &SolverOptions::default())?;
        Ok(())
    })
}

/// Fills `out` with the library defaults.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pinsync_dynamics_default(out: *mut PinsyncDynamics) -> PinsyncStatus {
    guard(|| {
        if out.is_null() {
            return fail(PinsyncStatus::NullPointer, "out is null");
        }
        let d = DynamicsConfig::default();
        *out = PinsyncDynamics {
            c: d.c,
            gain: d.gain,
            p1: d.chen.p1,
            p2: d.chen.p2,
            p3: d.chen.p3,
            variant: match d.chen_variant {
                ChenVariant::Standard => PinsyncChenVariant::Standard,
                ChenVariant::Augmented => PinsyncChenVariant::Augmented,
            },
            dt: d.dt,
            t_max: d.t_max,
            eps: d.eps,
            init_box: d.init_box,
            seed: d.seed,
        };
        Ok(())
    })
}

/// Integrates the pinned Chen network and reports the sync time.
///
/// # Safety
/// As for [`pinsync_effective_lambda1`]; `dynamics` must be valid and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pinsync_simulate(
    g: *const PinsyncGraph,
    pins: *const usize,
    n_pins: usize,
    failed: *const u8,
    dynamics: *const PinsyncDynamics,
    out: *mut PinsyncSimResult,
) -> PinsyncStatus {
    guard(|| {
        let graph = graph_ref(g)?;
        let Some(d) = dynamics.as_ref() else {
            return fail(PinsyncStatus::NullPointer, "dynamics is null");
        };
        if out.is_null() {
            return fail(PinsyncStatus::NullPointer, "out is null");
        }
        let pins = pin_set(graph, pins, n_pins)?;
        let mask = failure_mask(failed, n_pins)?;
        let cfg = DynamicsConfig {
            c: d.c,
            gain: d.gain,
            chen: ChenParams { p1: d.p1, p2: d.p2, p3: d.p3 },
            chen_variant: match d.variant {
                PinsyncChenVariant::Standard => ChenVariant::Standard,
                PinsyncChenVariant::Augmented => ChenVariant::Augmented,
            },
            dt: d.dt,
            t_max: d.t_max,
            eps: d.eps,
            init_box: d.init_box,
            seed: d.seed,
            sample_stride: None,
        };
        let r = simulate(graph, &pins, &cfg, &mask)?;
        *out = PinsyncSimResult {
            synced: i32::from(r.sync_time.is_some()),
            sync_time: r.sync_time.unwrap_or(f64::NAN),
            final_error: r.final_error,
        };
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next pinsync call on the same thread.
#[no_mangle]
pub extern "C" fn pinsync_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pinsync_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
