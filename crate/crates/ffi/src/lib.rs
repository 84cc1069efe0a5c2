//! C interface to the crystal library.
//!
//! Conventions: every function that produces text writes a heap string to
//! its out-parameter, which the caller releases with [`tc_string_free`].
//! Return codes are 0 (ok), 1 (a verification reported counterexamples),
//! 2 (invalid input), 3 (resource cap), 4 (caught panic). On nonzero
//! returns [`tc_last_error`] describes the problem; the pointer stays
//! valid until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tropcrys::error::{Error, Result};
use tropcrys::expr::tropicalize;
use tropcrys::geom::{self, catalog_entry, CatalogTarget, Suite};
use tropcrys::pcrystal::{self, crystal_graph, CrystalElt, CrystalGraph};
use tropcrys::udiso::{self, LatticePoint, Region};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(sanitized).expect("NULs removed"));
    });
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

fn error_status(e: &Error) -> c_int {
    match e {
        Error::ResourceCap(_) => 3,
        _ => 2,
    }
}

fn panic_text(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "unknown panic".to_string()
    }
}

/// Runs a fallible producer, routing its JSON to `out` and mapping errors
/// and panics to status codes. The producer returns (status, json) so
/// verification reports can signal failures while still emitting output.
fn run_json<F>(out: *mut *mut c_char, f: F) -> c_int
where
    F: FnOnce() -> Result<(c_int, String)>,
{
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok((status, json))) => {
            if !out.is_null() {
                match CString::new(json) {
                    Ok(s) => unsafe { *out = s.into_raw() },
                    Err(_) => {
                        set_last_error("output contained a NUL byte".into());
                        return 2;
                    }
                }
            }
            status
        }
        Ok(Err(e)) => {
            set_last_error(e.to_string());
            error_status(&e)
        }
        Err(payload) => {
            set_last_error(format!("panic: {}", panic_text(payload)));
            4
        }
    }
}

/// # Safety
/// `p` must be null or a NUL-terminated string valid for the call.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str> {
    if p.is_null() {
        return Err(Error::Parse(format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error::Parse(format!("{what} is not valid UTF-8")))
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn tc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Releases a string produced by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer previously returned through an
/// out-parameter of this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null after a
/// success. Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |s| s.as_ptr())
    })
}

/// Writes the JSON element list for the level-l crystal at rank n.
///
/// # Safety
/// `out_json` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_crystal_enumerate(
    n: usize,
    l: u64,
    out_json: *mut *mut c_char,
) -> c_int {
    run_json(out_json, || {
        let elements = pcrystal::enumerate(n, l)?;
        let value = serde_json::json!({
            "n": n,
            "l": l,
            "count": elements.len(),
            "elements": elements.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
        });
        Ok((0, value.to_string()))
    })
}

/// Applies an operator (f0..fn or e0..en) to a JSON element. Writes the
/// JSON result, or the literal `null` when the operator is undefined
/// there.
///
/// # Safety
/// `op` and `elt_json` must be NUL-terminated strings; `out_json` must be
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_crystal_apply(
    op: *const c_char,
    elt_json: *const c_char,
    out_json: *mut *mut c_char,
) -> c_int {
    let op = read_str(op, "op");
    let elt = read_str(elt_json, "element");
    run_json(out_json, || {
        let b = CrystalElt::parse_json(elt?)?;
        let text = match pcrystal::apply_named(op?, &b)? {
            Some(next) => next.to_json().to_string(),
            None => "null".to_string(),
        };
        Ok((0, text))
    })
}

/// Runs the minimal-element and axiom checks at (n, l) and writes the
/// JSON report. Returns 1 when the report contains failures.
///
/// # Safety
/// `out_json` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_crystal_perfect(n: usize, l: u64, out_json: *mut *mut c_char) -> c_int {
    run_json(out_json, || {
        let report = pcrystal::perfectness_check(n, l)?;
        let status = if report.passed() { 0 } else { 1 };
        let json = serde_json::to_value(&report)
            .expect("report serialization cannot fail")
            .to_string();
        Ok((status, json))
    })
}

/// Opaque colored-graph handle.
pub struct TcGraph {
    inner: CrystalGraph,
}

/// Builds the lowering graph at (n, l) and hands back an owned handle.
///
/// # Safety
/// `out_graph` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_new(n: usize, l: u64, out_graph: *mut *mut TcGraph) -> c_int {
    clear_last_error();
    if out_graph.is_null() {
        set_last_error("out_graph is null".into());
        return 2;
    }
    match catch_unwind(|| crystal_graph(n, l)) {
        Ok(Ok(graph)) => {
            *out_graph = Box::into_raw(Box::new(TcGraph { inner: graph }));
            0
        }
        Ok(Err(e)) => {
            set_last_error(e.to_string());
            error_status(&e)
        }
        Err(payload) => {
            set_last_error(format!("panic: {}", panic_text(payload)));
            4
        }
    }
}

/// Releases a graph handle. Null is ignored.
///
/// # Safety
/// `graph` must be null or a handle from [`tc_graph_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_free(graph: *mut TcGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of elements in the graph; 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle from [`tc_graph_new`].
#[no_mangle]
pub unsafe extern "C" fn tc_graph_node_count(graph: *const TcGraph) -> u64 {
    graph.as_ref().map_or(0, |g| g.inner.nodes().len() as u64)
}

/// Number of colored edges in the graph; 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle from [`tc_graph_new`].
#[no_mangle]
pub unsafe extern "C" fn tc_graph_edge_count(graph: *const TcGraph) -> u64 {
    graph.as_ref().map_or(0, |g| g.inner.edges().len() as u64)
}

/// Writes the DOT rendering of the graph.
///
/// # Safety
/// `graph` must be a live handle; `out_text` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_dot(graph: *const TcGraph, out_text: *mut *mut c_char) -> c_int {
    let graph = graph.as_ref();
    run_json(out_text, || {
        let g = graph.ok_or_else(|| Error::Parse("graph handle is null".into()))?;
        Ok((0, g.inner.to_dot()))
    })
}

/// Writes the JSON rendering of the graph.
///
/// # Safety
/// `graph` must be a live handle; `out_json` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_graph_json(graph: *const TcGraph, out_json: *mut *mut c_char) -> c_int {
    let graph = graph.as_ref();
    run_json(out_json, || {
        let g = graph.ok_or_else(|| Error::Parse("graph handle is null".into()))?;
        Ok((0, g.inner.to_json().to_string()))
    })
}

/// Evaluates gammaI / epsI, or applies eI (with rational parameter text
/// `c`, required exactly then), at a rational point "p/q,...".
///
/// # Safety
/// `point` and `action` must be NUL-terminated strings; `c` may be null;
/// `out_json` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_geom_eval(
    n: usize,
    point: *const c_char,
    action: *const c_char,
    c: *const c_char,
    out_json: *mut *mut c_char,
) -> c_int {
    let point = read_str(point, "point");
    let action = read_str(action, "action");
    let param = if c.is_null() {
        Ok(None)
    } else {
        read_str(c, "parameter").map(Some)
    };
    run_json(out_json, || {
        let value = geom::eval_action(n, point?, action?, param?)?;
        Ok((0, value.to_string()))
    })
}

/// Runs a torus verification suite (axioms, lemma41, sigma-commute, eq43)
/// and writes the JSON report. Returns 1 when checks failed.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `out_json` null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn tc_geom_verify(
    suite: *const c_char,
    n: usize,
    trials: u64,
    seed: u64,
    out_json: *mut *mut c_char,
) -> c_int {
    let suite = read_str(suite, "suite");
    run_json(out_json, || {
        let suite: Suite = suite?.parse()?;
        let report = geom::verify_suite(suite, n, trials, seed)?;
        let status = if report.passed() { 0 } else { 1 };
        let json = serde_json::to_value(&report)
            .expect("report serialization cannot fail")
            .to_string();
        Ok((status, json))
    })
}

/// Applies a one-step lattice operator (f0..fn or e0..en) to an integer
/// point "c2,..." and writes the moved point as JSON.
///
/// # Safety
/// `op` and `point` must be NUL-terminated strings; `out_json` null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tc_ud_apply(
    op: *const c_char,
    point: *const c_char,
    n: usize,
    out_json: *mut *mut c_char,
) -> c_int {
    let op = read_str(op, "op");
    let point = read_str(point, "point");
    run_json(out_json, || {
        let p = LatticePoint::parse(n, point?)?;
        let moved = udiso::apply_named(op?, &p)?;
        Ok((0, moved.to_json().to_string()))
    })
}

/// Runs a lattice verification suite (iso or mechanical) and writes the
/// JSON report. A nonnegative `box_radius` checks the whole box
/// [-box_radius, box_radius]^{2n-2}; a negative one samples `trials`
/// seeded points (or the rank default when `trials` is 0). Returns 1 when
/// checks failed.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `out_json` null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn tc_ud_check(
    suite: *const c_char,
    n: usize,
    box_radius: i64,
    trials: usize,
    seed: u64,
    out_json: *mut *mut c_char,
) -> c_int {
    let suite = read_str(suite, "suite");
    run_json(out_json, || {
        let region = if box_radius >= 0 {
            Region::Box { radius: box_radius }
        } else if trials == 0 {
            Region::default_for(n)
        } else {
            Region::Sample { count: trials, seed }
        };
        let report = match suite? {
            "iso" => udiso::verify_iso(n, region)?,
            "mechanical" => udiso::verify_ud_mechanical(n, region)?,
            other => {
                return Err(Error::Parse(format!(
                    "unknown suite {other:?}; expected iso or mechanical"
                )))
            }
        };
        let status = if report.passed() { 0 } else { 1 };
        let json = serde_json::to_value(&report)
            .expect("report serialization cannot fail")
            .to_string();
        Ok((status, json))
    })
}

/// Writes a catalog expression (gammaI, epsI, or eI:K) and its tropical
/// rewrite as JSON.
///
/// # Safety
/// `target` must be a NUL-terminated string; `out_json` null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn tc_ud_tropicalize(
    target: *const c_char,
    n: usize,
    out_json: *mut *mut c_char,
) -> c_int {
    let target = read_str(target, "target");
    run_json(out_json, || {
        let target: CatalogTarget = target?.parse()?;
        let source = catalog_entry(n, target)?;
        let tropical = tropicalize(&source);
        let value = serde_json::json!({
            "n": n,
            "target": target.to_string(),
            "source": source.to_string(),
            "tropical": tropical.to_string(),
        });
        Ok((0, value.to_string()))
    })
}
