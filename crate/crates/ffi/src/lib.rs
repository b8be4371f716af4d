//! C interface to the multicut solver.
//!
//! Graphs and solutions are opaque handles owned by the caller and released
//! with the matching `*_free` function. Every fallible call returns an
//! [`McStatus`]; on failure, [`mc_last_error_message`] describes the most
//! recent error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use multicut::{Error, Mode, Solution, SolverConfig, WeightedGraph};

/// Opaque instance handle.
pub struct McGraph(WeightedGraph);

/// Opaque result handle.
pub struct McSolution(Solution);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    InvalidGraph = 4,
    ConfigError = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McMode {
    Primal = 0,
    PrimalDual = 1,
    PrimalDualPlus = 2,
    Dual = 3,
    Gaec = 4,
}

impl From<McMode> for Mode {
    fn from(m: McMode) -> Self {
        match m {
            McMode::Primal => Mode::Primal,
            McMode::PrimalDual => Mode::PrimalDual,
            McMode::PrimalDualPlus => Mode::PrimalDualPlus,
            McMode::Dual => Mode::Dual,
            McMode::Gaec => Mode::Gaec,
        }
    }
}

/// Solver settings; obtain defaults from [`mc_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct McConfig {
    pub mode: McMode,
    pub mp_iterations: usize,
    pub max_cycle_length: usize,
    pub matching_switch_fraction: f64,
    pub matching_rounds: usize,
    pub max_rounds: usize,
    pub separation_rounds: usize,
    pub matching_jitter: bool,
    pub seed: u64,
    /// 0 uses the machine's parallelism.
    pub threads: usize,
}

impl From<&McConfig> for SolverConfig {
    fn from(c: &McConfig) -> Self {
        SolverConfig {
            mode: c.mode.into(),
            mp_iterations: c.mp_iterations,
            max_cycle_length: c.max_cycle_length,
            matching_switch_fraction: c.matching_switch_fraction,
            matching_rounds: c.matching_rounds,
            max_rounds: c.max_rounds,
            separation_rounds: c.separation_rounds,
            matching_jitter: c.matching_jitter,
            seed: c.seed,
            threads: c.threads,
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

fn fail(status: McStatus, msg: impl Into<String>) -> McStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> McStatus {
    match e {
        Error::Parse { .. } | Error::Io(_) => McStatus::ParseError,
        Error::InvalidGraph(_) | Error::NodeOutOfRange { .. } | Error::LabelingMismatch { .. } => {
            McStatus::InvalidGraph
        }
        Error::Config(_) => McStatus::ConfigError,
        Error::SizeGuard { .. } => McStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> McStatus) -> McStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(McStatus::Panic, "internal panic"),
    }
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a graph from `num_edges` parallel arrays of endpoints and costs.
/// Parallel edges are summed.
///
/// # Safety
/// `us`, `vs` and `costs` must each point to `num_edges` readable elements
/// (they may be NULL when `num_edges` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_new(
    num_nodes: usize,
    us: *const usize,
    vs: *const usize,
    costs: *const f64,
    num_edges: usize,
    out: *mut *mut McGraph,
) -> McStatus {
    guard(|| {
        if out.is_null() || (num_edges > 0 && (us.is_null() || vs.is_null() || costs.is_null())) {
            return fail(McStatus::NullPointer, "null pointer argument");
        }
        let (us, vs, cs) = if num_edges == 0 {
            (&[][..], &[][..], &[][..])
        } else {
            (
                slice::from_raw_parts(us, num_edges),
                slice::from_raw_parts(vs, num_edges),
                slice::from_raw_parts(costs, num_edges),
            )
        };
        if let Some(c) = cs.iter().find(|c| !c.is_finite()) {
            return fail(McStatus::InvalidGraph, format!("non-finite cost {c}"));
        }
        let edges = us.iter().zip(vs).zip(cs).map(|((&u, &v), &c)| (u, v, c));
        match WeightedGraph::new(num_nodes, edges) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(McGraph(g)));
                McStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Parses an instance in the `MULTICUT` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_parse(text: *const c_char, out: *mut *mut McGraph) -> McStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(McStatus::NullPointer, "null pointer argument");
        }
        let bytes = CStr::from_ptr(text).to_bytes();
        match multicut::graph::parse_instance(bytes) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(McGraph(g)));
                McStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `g` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_num_nodes(g: *const McGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.num_nodes())
}

/// # Safety
/// `g` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_num_edges(g: *const McGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.num_edges())
}

/// # Safety
/// `g` must be NULL or a handle from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn mc_graph_free(g: *mut McGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Default settings for `mode`.
#[no_mangle]
pub extern "C" fn mc_config_default(mode: McMode) -> McConfig {
    let c = SolverConfig::new(mode.into());
    McConfig {
        mode,
        mp_iterations: c.mp_iterations,
        max_cycle_length: c.max_cycle_length,
        matching_switch_fraction: c.matching_switch_fraction,
        matching_rounds: c.matching_rounds,
        max_rounds: c.max_rounds,
        separation_rounds: c.separation_rounds,
        matching_jitter: c.matching_jitter,
        seed: c.seed,
        threads: c.threads,
    }
}

/// Solves `g`. A NULL `config` means the defaults of mode PD.
///
/// # Safety
/// `g` must be a live handle, `config` NULL or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mc_solve(
    g: *const McGraph,
    config: *const McConfig,
    out: *mut *mut McSolution,
) -> McStatus {
    guard(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return fail(McStatus::NullPointer, "null pointer argument");
        };
        let cfg = config
            .as_ref()
            .map_or_else(|| SolverConfig::new(Mode::PrimalDual), SolverConfig::from);
        match multicut::solve(&g.0, &cfg) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(McSolution(s)));
                McStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Objective of the returned clustering, or NaN for a NULL handle.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mc_solution_primal_cost(s: *const McSolution) -> f64 {
    s.as_ref().map_or(f64::NAN, |s| s.0.primal_cost)
}

/// Lower bound; negative infinity when the mode computes none.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mc_solution_lower_bound(s: *const McSolution) -> f64 {
    s.as_ref().map_or(f64::NAN, |s| s.0.lower_bound)
}

/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mc_solution_num_nodes(s: *const McSolution) -> usize {
    s.as_ref().map_or(0, |s| s.0.labeling.len())
}

/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mc_solution_num_clusters(s: *const McSolution) -> usize {
    s.as_ref().map_or(0, |s| s.0.labeling.num_clusters())
}

/// Copies the cluster id of every node into `labels`, which must hold at
/// least `mc_solution_num_nodes(s)` entries.
///
/// # Safety
/// `s` must be a live handle; `labels` must point to `len` writable elements.
#[no_mangle]
pub unsafe extern "C" fn mc_solution_labels(
    s: *const McSolution,
    labels: *mut usize,
    len: usize,
) -> McStatus {
    guard(|| {
        let Some(s) = s.as_ref() else {
            return fail(McStatus::NullPointer, "null pointer argument");
        };
        let src = s.0.labeling.cluster_of();
        if src.is_empty() {
            return McStatus::Ok;
        }
        if labels.is_null() {
            return fail(McStatus::NullPointer, "null pointer argument");
        }
        if len < src.len() {
            return fail(
                McStatus::BufferTooSmall,
                format!("buffer holds {len} labels, need {}", src.len()),
            );
        }
        slice::from_raw_parts_mut(labels, src.len()).copy_from_slice(src);
        McStatus::Ok
    })
}

/// # Safety
/// `s` must be NULL or a handle from this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn mc_solution_free(s: *mut McSolution) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}
