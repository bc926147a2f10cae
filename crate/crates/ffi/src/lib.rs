//! C ABI over `qrg-core`.
//!
//! Graphs are opaque handles created by `qrg_graph_build` and released with
//! `qrg_graph_free`. Every fallible call returns a `QrgStatus`; on failure the
//! message is available from `qrg_last_error_message` on the same thread.
//! Results are written through out-pointers, which must be non-null.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;
use std::sync::OnceLock;

use qrg_core::analysis::{self, ComponentStats};
use qrg_core::branching::{self, GwConfig};
use qrg_core::error::QrgError;
use qrg_core::model::{self, ModelParams};
use qrg_core::sampler::{self, MultiGraph, SamplerOptions};
use qrg_core::theory;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Quadrature = 3,
    Solver = 4,
    OutOfRange = 5,
    Panic = 6,
    Internal = 7,
}

/// Opaque graph handle.
pub struct QrgGraph {
    graph: MultiGraph,
    components: OnceLock<Vec<ComponentStats>>,
}

impl QrgGraph {
    fn new(graph: MultiGraph) -> Self {
        Self {
            graph,
            components: OnceLock::new(),
        }
    }

    fn components(&self) -> &[ComponentStats] {
        self.components.get_or_init(|| analysis::components(&self.graph))
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QrgVertex {
    pub circle: u32,
    pub start: f64,
    pub length: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QrgEdge {
    pub u: u32,
    pub v: u32,
    pub multiplicity: u32,
}

/// Statistics of one component. A rank past the last component yields an
/// all-zero record.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QrgComponent {
    pub rank: u64,
    pub vertex_count: u64,
    pub total_length: f64,
    pub edge_count_simple: u64,
    pub edge_count_multi: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QrgTheory {
    pub beta: f64,
    pub lambda: f64,
    pub f: f64,
    pub gamma: f64,
    pub rho: f64,
    pub zeta: f64,
    pub giant_length_density: f64,
    pub vertex_density: f64,
    pub edge_density: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QrgSurvival {
    pub estimate: f64,
    pub stderr: f64,
    pub survived: u64,
    pub trials: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    let c = CString::new(msg).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(QrgStatus, String);

impl From<QrgError> for Failure {
    fn from(e: QrgError) -> Self {
        let status = match e {
            QrgError::Domain(_) => QrgStatus::InvalidArgument,
            QrgError::Quadrature { .. } => QrgStatus::Quadrature,
            QrgError::Solver(_) | QrgError::FixedPoint { .. } => QrgStatus::Solver,
            _ => QrgStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QrgStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QrgStatus {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QrgStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside qrg");
            QrgStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn graph_ref<'a>(g: *const QrgGraph) -> Result<&'a QrgGraph, Failure> {
    g.as_ref().ok_or_else(|| null("graph"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qrg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qrg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Samples a graph. On success `*out` owns a new handle.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn qrg_graph_build(
    beta: f64,
    lambda: f64,
    n: u64,
    seed: u64,
    audit: bool,
    out: *mut *mut QrgGraph,
) -> QrgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = ModelParams::new(beta, lambda, n)?;
        let options = SamplerOptions {
            audit,
            ..Default::default()
        };
        let graph = sampler::build_graph_with(&params, seed, &options)?;
        out.write(Box::into_raw(Box::new(QrgGraph::new(graph))));
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `graph` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qrg_graph_free(graph: *mut QrgGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Creates a new handle with parallel edges collapsed and reports the number
/// of removed copies.
///
/// # Safety
/// `graph` must be a live handle; `out` and `excess` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_graph_simplify(
    graph: *const QrgGraph,
    out: *mut *mut QrgGraph,
    excess: *mut u64,
) -> QrgStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        if out.is_null() || excess.is_null() {
            return Err(null("out"));
        }
        let (simple, removed) = sampler::simplify(&g.graph);
        excess.write(removed);
        out.write(Box::into_raw(Box::new(QrgGraph::new(simple))));
        Ok(())
    })
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_graph_vertex_count(graph: *const QrgGraph, out: *mut usize) -> QrgStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        write(out, g.graph.vertex_count(), "out")
    })
}

/// Number of edge records (adjacent pairs).
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_graph_edge_count(graph: *const QrgGraph, out: *mut usize) -> QrgStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        write(out, g.graph.edges().len(), "out")
    })
}

/// Number of edges counted with multiplicity.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_graph_edge_count_multi(graph: *const QrgGraph, out: *mut u64) -> QrgStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        write(out, g.graph.edge_count_multi(), "out")
    })
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_graph_vertex(
    graph: *const QrgGraph,
    index: usize,
    out: *mut QrgVertex,
) -> QrgStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        let v = g.graph.vertices().get(index).ok_or_else(|| {
            Failure(QrgStatus::OutOfRange, format!("vertex index {index} out of range"))
        })?;
        write(
            out,
            QrgVertex {
                circle: v.circle,
                start: v.start,
                length: v.length,
            },
            "out",
        )
    })
}

/// Edge records are sorted by `(u, v)` with `u < v`.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_graph_edge(graph: *const QrgGraph, index: usize, out: *mut QrgEdge) -> QrgStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        let e = g.graph.edges().get(index).ok_or_else(|| {
            Failure(QrgStatus::OutOfRange, format!("edge index {index} out of range"))
        })?;
        write(
            out,
            QrgEdge {
                u: e.u,
                v: e.v,
                multiplicity: e.multiplicity,
            },
            "out",
        )
    })
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_graph_component_count(graph: *const QrgGraph, out: *mut usize) -> QrgStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        write(out, g.components().len(), "out")
    })
}

/// Component of the given 1-based rank, largest first.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_graph_component(
    graph: *const QrgGraph,
    rank: usize,
    out: *mut QrgComponent,
) -> QrgStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        if rank == 0 {
            return Err(Failure(QrgStatus::OutOfRange, "ranks start at 1".into()));
        }
        let c = analysis::nth_component(g.components(), rank);
        write(
            out,
            QrgComponent {
                rank: rank as u64,
                vertex_count: c.vertex_count,
                total_length: c.total_length,
                edge_count_simple: c.edge_count_simple,
                edge_count_multi: c.edge_count_multi,
            },
            "out",
        )
    })
}

/// Probability that two length-uniform points share a component.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_graph_same_component_length_prob(
    graph: *const QrgGraph,
    out: *mut f64,
) -> QrgStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        let p = analysis::same_component_length_prob_from(g.components(), &g.graph);
        write(out, p, "out")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_arc_intersection_length(
    a_start: f64,
    a_len: f64,
    b_start: f64,
    b_len: f64,
    beta: f64,
    out: *mut f64,
) -> QrgStatus {
    guard(|| {
        let v = model::arc_intersection_length(a_start, a_len, b_start, b_len, beta)?;
        write(out, v, "out")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_critical_f(beta: f64, lambda: f64, out: *mut f64) -> QrgStatus {
    guard(|| write(out, theory::critical_f(beta, lambda)?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_solve_gamma(beta: f64, lambda: f64, tol: f64, out: *mut f64) -> QrgStatus {
    guard(|| write(out, theory::solve_gamma(beta, lambda, tol)?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_extinction_fixed_point(
    beta: f64,
    lambda: f64,
    tol: f64,
    out: *mut f64,
) -> QrgStatus {
    guard(|| write(out, branching::extinction_fixed_point(beta, lambda, tol)?, "out"))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_theory_predictions(beta: f64, lambda: f64, out: *mut QrgTheory) -> QrgStatus {
    guard(|| {
        let p = theory::predictions(beta, lambda)?;
        write(
            out,
            QrgTheory {
                beta: p.beta,
                lambda: p.lambda,
                f: p.f,
                gamma: p.gamma,
                rho: p.rho,
                zeta: p.zeta,
                giant_length_density: p.giant_length_density,
                vertex_density: p.vertex_density,
                edge_density: p.edge_density,
            },
            "out",
        )
    })
}

/// Monte Carlo survival frequency of the branching process.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qrg_gw_survival_mc(
    beta: f64,
    lambda: f64,
    trials: u64,
    max_generations: u32,
    population_cap: u64,
    seed: u64,
    out: *mut QrgSurvival,
) -> QrgStatus {
    guard(|| {
        let config = GwConfig {
            beta,
            hole_intensity: lambda,
            max_generations,
            population_cap,
            trials,
        };
        let s = branching::gw_survival_mc(&config, seed)?;
        write(
            out,
            QrgSurvival {
                estimate: s.estimate,
                stderr: s.stderr,
                survived: s.survived,
                trials: s.trials,
            },
            "out",
        )
    })
}
