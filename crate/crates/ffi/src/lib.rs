//! C ABI over `frobstrat`.
//!
//! Conventions:
//! - every fallible function returns a [`FrobStatus`]; results go through
//!   out-pointers, which are only written on `FROB_STATUS_OK`;
//! - polygons and polygon lists are opaque handles owned by the caller and
//!   released with their `*_free` function;
//! - strings returned by the library are NUL-terminated, heap-allocated and
//!   released with [`frob_string_free`];
//! - the message of the most recent error on the calling thread is
//!   available from [`frob_last_error_message`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use frobstrat::enumerate::admissible_with_cap;
use frobstrat::verify::{Claim, GridPoint, Verifier};
use frobstrat::{BundleInvariants, CurveContext, Error, HNPolygon, Rational};

/// Status codes. Values are stable.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrobStatus {
    Ok = 0,
    NonPrimeCharacteristic = 1,
    NegativeGenus = 2,
    GenusTooSmall = 3,
    InvalidRank = 4,
    NotConvex = 5,
    BadEndpoints = 6,
    IndivisibleDegree = 7,
    EndpointMismatch = 8,
    BudgetExceeded = 9,
    InvalidConstraints = 10,
    PointNotMapped = 11,
    Parse = 12,
    Overflow = 13,
    /// A required pointer argument was NULL.
    NullPointer = 100,
    /// A caller-provided buffer is too short; the needed length was written.
    BufferTooSmall = 101,
    /// An index was out of range.
    OutOfRange = 102,
    /// Internal panic caught at the boundary.
    Internal = 199,
}

impl From<&Error> for FrobStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NonPrimeCharacteristic(_) => FrobStatus::NonPrimeCharacteristic,
            Error::NegativeGenus(_) => FrobStatus::NegativeGenus,
            Error::GenusTooSmall(_) => FrobStatus::GenusTooSmall,
            Error::InvalidRank(_) => FrobStatus::InvalidRank,
            Error::NotConvex(_) => FrobStatus::NotConvex,
            Error::BadEndpoints(_) => FrobStatus::BadEndpoints,
            Error::IndivisibleDegree { .. } => FrobStatus::IndivisibleDegree,
            Error::EndpointMismatch(..) => FrobStatus::EndpointMismatch,
            Error::BudgetExceeded(_) => FrobStatus::BudgetExceeded,
            Error::InvalidConstraints(_) => FrobStatus::InvalidConstraints,
            Error::PointNotMapped(_) => FrobStatus::PointNotMapped,
            Error::Parse(_) => FrobStatus::Parse,
            Error::Overflow(_) => FrobStatus::Overflow,
        }
    }
}

/// `(rank, degree)` of a bundle.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrobInvariants {
    pub rank: i64,
    pub degree: i64,
}

/// Reduced fraction with positive denominator.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrobRational {
    pub numer: i64,
    pub denom: i64,
}

impl From<Rational> for FrobRational {
    fn from(q: Rational) -> Self {
        FrobRational {
            numer: q.numer(),
            denom: q.denom(),
        }
    }
}

impl From<BundleInvariants> for FrobInvariants {
    fn from(b: BundleInvariants) -> Self {
        FrobInvariants {
            rank: b.rank(),
            degree: b.degree(),
        }
    }
}

/// Opaque polygon handle.
pub struct FrobPolygon {
    inner: HNPolygon,
}

/// Opaque list of polygons.
pub struct FrobPolygonList {
    items: Vec<HNPolygon>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Runs `f` at the boundary: maps errors to status codes, records the
/// message, and keeps panics from unwinding into C.
fn guard<F>(f: F) -> FrobStatus
where
    F: FnOnce() -> Result<(), FrobStatus>,
{
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FrobStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_last_error("internal panic".into());
            FrobStatus::Internal
        }
    }
}

fn fail(e: Error) -> FrobStatus {
    set_last_error(format!("{}: {e}", e.name()));
    FrobStatus::from(&e)
}

fn null(what: &str) -> FrobStatus {
    set_last_error(format!("{what} is NULL"));
    FrobStatus::NullPointer
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, FrobStatus> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, FrobStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

fn context(p: i64, g: i64) -> Result<CurveContext, FrobStatus> {
    CurveContext::new(p, g).map_err(fail)
}

fn bundle(rank: i64, degree: i64) -> Result<BundleInvariants, FrobStatus> {
    BundleInvariants::new(rank, degree).map_err(fail)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Name of a status code as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn frob_status_name(status: FrobStatus) -> *const c_char {
    let s: &'static CStr = match status {
        FrobStatus::Ok => c"Ok",
        FrobStatus::NonPrimeCharacteristic => c"NonPrimeCharacteristic",
        FrobStatus::NegativeGenus => c"NegativeGenus",
        FrobStatus::GenusTooSmall => c"GenusTooSmall",
        FrobStatus::InvalidRank => c"InvalidRank",
        FrobStatus::NotConvex => c"NotConvex",
        FrobStatus::BadEndpoints => c"BadEndpoints",
        FrobStatus::IndivisibleDegree => c"IndivisibleDegree",
        FrobStatus::EndpointMismatch => c"EndpointMismatch",
        FrobStatus::BudgetExceeded => c"BudgetExceeded",
        FrobStatus::InvalidConstraints => c"InvalidConstraints",
        FrobStatus::PointNotMapped => c"PointNotMapped",
        FrobStatus::Parse => c"Parse",
        FrobStatus::Overflow => c"Overflow",
        FrobStatus::NullPointer => c"NullPointer",
        FrobStatus::BufferTooSmall => c"BufferTooSmall",
        FrobStatus::OutOfRange => c"OutOfRange",
        FrobStatus::Internal => c"Internal",
    };
    s.as_ptr()
}

/// Message of the last failed call on this thread, or NULL. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn frob_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Validates a curve context (prime `p`, `g ≥ 0`).
#[no_mangle]
pub extern "C" fn frob_check_context(p: i64, g: i64) -> FrobStatus {
    guard(|| context(p, g).map(drop))
}

#[no_mangle]
pub unsafe extern "C" fn frob_slope(rank: i64, degree: i64, out_slope: *mut FrobRational) -> FrobStatus {
    guard(|| {
        let dst = out(out_slope, "out_slope")?;
        *dst = bundle(rank, degree)?.slope().into();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn frob_pushforward_invariants(
    p: i64,
    g: i64,
    rank: i64,
    degree: i64,
    out_inv: *mut FrobInvariants,
) -> FrobStatus {
    guard(|| {
        let dst = out(out_inv, "out_inv")?;
        let res = frobstrat::pushforward_invariants(bundle(rank, degree)?, context(p, g)?).map_err(fail)?;
        *dst = res.into();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn frob_pullback_invariants(
    p: i64,
    g: i64,
    rank: i64,
    degree: i64,
    out_inv: *mut FrobInvariants,
) -> FrobStatus {
    guard(|| {
        let dst = out(out_inv, "out_inv")?;
        let res = frobstrat::pullback_invariants(bundle(rank, degree)?, context(p, g)?).map_err(fail)?;
        *dst = res.into();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn frob_pushforward_slope(
    p: i64,
    g: i64,
    rank: i64,
    degree: i64,
    out_slope: *mut FrobRational,
) -> FrobStatus {
    guard(|| {
        let dst = out(out_slope, "out_slope")?;
        let res = frobstrat::pushforward_slope(bundle(rank, degree)?, context(p, g)?).map_err(fail)?;
        *dst = res.into();
        Ok(())
    })
}

/// Writes the `p` gradeds of the canonical filtration into `buf`.
///
/// `*out_len` always receives `p` on success or `BufferTooSmall`; in the
/// latter case nothing is written to `buf`.
#[no_mangle]
pub unsafe extern "C" fn frob_canonical_filtration_profile(
    p: i64,
    g: i64,
    rank: i64,
    degree: i64,
    buf: *mut FrobInvariants,
    capacity: usize,
    out_len: *mut usize,
) -> FrobStatus {
    guard(|| {
        let len = out(out_len, "out_len")?;
        let profile = frobstrat::canonical_filtration_profile(bundle(rank, degree)?, context(p, g)?).map_err(fail)?;
        *len = profile.len();
        if capacity < profile.len() {
            set_last_error(format!("buffer holds {capacity}, need {}", profile.len()));
            return Err(FrobStatus::BufferTooSmall);
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        let dst = std::slice::from_raw_parts_mut(buf, profile.len());
        for (slot, graded) in dst.iter_mut().zip(profile) {
            *slot = graded.into();
        }
        Ok(())
    })
}

/// Builds a canonical polygon from `n` vertices given as parallel arrays.
#[no_mangle]
pub unsafe extern "C" fn frob_polygon_from_vertices(
    xs: *const i64,
    ys: *const i64,
    n: usize,
    out_polygon: *mut *mut FrobPolygon,
) -> FrobStatus {
    guard(|| {
        let dst = out(out_polygon, "out_polygon")?;
        if n > 0 && (xs.is_null() || ys.is_null()) {
            return Err(null("xs/ys"));
        }
        let pts: Vec<(i64, i64)> = if n == 0 {
            Vec::new()
        } else {
            let xs = std::slice::from_raw_parts(xs, n);
            let ys = std::slice::from_raw_parts(ys, n);
            xs.iter().copied().zip(ys.iter().copied()).collect()
        };
        let poly = frobstrat::polygon_from_vertices(&pts).map_err(fail)?;
        *dst = Box::into_raw(Box::new(FrobPolygon { inner: poly }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn frob_polygon_from_json(json: *const c_char, out_polygon: *mut *mut FrobPolygon) -> FrobStatus {
    guard(|| {
        let dst = out(out_polygon, "out_polygon")?;
        let text = handle(json, "json").map(|_| CStr::from_ptr(json))?;
        let text = text.to_str().map_err(|e| fail(Error::Parse(format!("UTF-8: {e}"))))?;
        let poly = HNPolygon::from_json(text).map_err(fail)?;
        *dst = Box::into_raw(Box::new(FrobPolygon { inner: poly }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn frob_oper_polygon(r: i64, d: i64, g: i64, out_polygon: *mut *mut FrobPolygon) -> FrobStatus {
    guard(|| {
        let dst = out(out_polygon, "out_polygon")?;
        let poly = frobstrat::oper_polygon(r, d, g).map_err(fail)?;
        *dst = Box::into_raw(Box::new(FrobPolygon { inner: poly }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn frob_polygon_free(polygon: *mut FrobPolygon) {
    if !polygon.is_null() {
        drop(Box::from_raw(polygon));
    }
}

/// Number of vertices, 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn frob_polygon_vertex_count(polygon: *const FrobPolygon) -> usize {
    polygon.as_ref().map_or(0, |p| p.inner.vertices().len())
}

#[no_mangle]
pub unsafe extern "C" fn frob_polygon_vertex(
    polygon: *const FrobPolygon,
    index: usize,
    out_x: *mut i64,
    out_y: *mut i64,
) -> FrobStatus {
    guard(|| {
        let poly = handle(polygon, "polygon")?;
        let (x, y) = (out(out_x, "out_x")?, out(out_y, "out_y")?);
        let &(vx, vy) = poly.inner.vertices().get(index).ok_or_else(|| {
            set_last_error(format!("vertex index {index} out of range"));
            FrobStatus::OutOfRange
        })?;
        *x = vx;
        *y = vy;
        Ok(())
    })
}

/// Polygon JSON (`{"r":..,"d":..,"vertices":[[x,y],...]}`).
#[no_mangle]
pub unsafe extern "C" fn frob_polygon_to_json(polygon: *const FrobPolygon, out_json: *mut *mut c_char) -> FrobStatus {
    guard(|| {
        let dst = out(out_json, "out_json")?;
        *dst = into_c_string(handle(polygon, "polygon")?.inner.to_json());
        Ok(())
    })
}

/// `*out_result` is true iff `a` lies on or above `b`.
#[no_mangle]
pub unsafe extern "C" fn frob_polygon_dominates(
    a: *const FrobPolygon,
    b: *const FrobPolygon,
    out_result: *mut bool,
) -> FrobStatus {
    guard(|| {
        let dst = out(out_result, "out_result")?;
        let (a, b) = (handle(a, "a")?, handle(b, "b")?);
        *dst = frobstrat::dominates(&a.inner, &b.inner).map_err(fail)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn frob_polygon_mu_extremes(
    polygon: *const FrobPolygon,
    out_max: *mut FrobRational,
    out_min: *mut FrobRational,
) -> FrobStatus {
    guard(|| {
        let poly = handle(polygon, "polygon")?;
        let (hi, lo) = (out(out_max, "out_max")?, out(out_min, "out_min")?);
        let (max, min) = frobstrat::mu_extremes(&poly.inner);
        *hi = max.into();
        *lo = min.into();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn frob_polygon_is_oper_shape(
    polygon: *const FrobPolygon,
    g: i64,
    out_result: *mut bool,
) -> FrobStatus {
    guard(|| {
        let dst = out(out_result, "out_result")?;
        *dst = frobstrat::is_oper_shape(&handle(polygon, "polygon")?.inner, g).map_err(fail)?;
        Ok(())
    })
}

/// Admissible polygons of rank `r`, degree `d` on a curve of genus `g ≥ 2`.
/// `node_cap` of 0 selects the default budget.
#[no_mangle]
pub unsafe extern "C" fn frob_admissible_polygons(
    r: i64,
    d: i64,
    p: i64,
    g: i64,
    node_cap: u64,
    out_list: *mut *mut FrobPolygonList,
) -> FrobStatus {
    guard(|| {
        let dst = out(out_list, "out_list")?;
        let cap = if node_cap == 0 {
            frobstrat::enumerate::DEFAULT_NODE_CAP
        } else {
            node_cap
        };
        let e = admissible_with_cap(r, d, context(p, g)?, cap).map_err(fail)?;
        *dst = Box::into_raw(Box::new(FrobPolygonList { items: e.polygons }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn frob_polygon_list_len(list: *const FrobPolygonList) -> usize {
    list.as_ref().map_or(0, |l| l.items.len())
}

/// Copies element `index` into a new polygon handle.
#[no_mangle]
pub unsafe extern "C" fn frob_polygon_list_get(
    list: *const FrobPolygonList,
    index: usize,
    out_polygon: *mut *mut FrobPolygon,
) -> FrobStatus {
    guard(|| {
        let dst = out(out_polygon, "out_polygon")?;
        let item = handle(list, "list")?.items.get(index).ok_or_else(|| {
            set_last_error(format!("list index {index} out of range"));
            FrobStatus::OutOfRange
        })?;
        *dst = Box::into_raw(Box::new(FrobPolygon { inner: item.clone() }));
        Ok(())
    })
}

/// Dominance poset of the list, as JSON (`dot == false`) or Graphviz DOT.
#[no_mangle]
pub unsafe extern "C" fn frob_polygon_list_poset(
    list: *const FrobPolygonList,
    dot: bool,
    out_text: *mut *mut c_char,
) -> FrobStatus {
    guard(|| {
        let dst = out(out_text, "out_text")?;
        let poset = frobstrat::build_poset(&handle(list, "list")?.items).map_err(fail)?;
        *dst = into_c_string(if dot { poset.to_dot() } else { poset.to_json() });
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn frob_polygon_list_free(list: *mut FrobPolygonList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// Runs a verification claim (`"oper-dominance"`, `"gap-equivalence"`,
/// `"pushforward-oper"`, `"maximal-stratum"`) and returns the report JSON.
/// `r` is ignored except for oper dominance; `node_cap` of 0 selects the
/// default budget.
#[no_mangle]
pub unsafe extern "C" fn frob_verify_json(
    claim: *const c_char,
    p: i64,
    g: i64,
    r: i64,
    d: i64,
    node_cap: u64,
    out_json: *mut *mut c_char,
) -> FrobStatus {
    guard(|| {
        let dst = out(out_json, "out_json")?;
        let name = handle(claim, "claim").map(|_| CStr::from_ptr(claim))?;
        let name = name.to_str().map_err(|e| fail(Error::Parse(format!("UTF-8: {e}"))))?;
        let claim: Claim = name.parse().map_err(fail)?;
        let verifier = if node_cap == 0 {
            Verifier::default()
        } else {
            Verifier::new(node_cap)
        };
        let r = if claim == Claim::OperDominance { r } else { p };
        let report = verifier.run(claim, &GridPoint { p, g, r, d }).map_err(fail)?;
        *dst = into_c_string(report.to_json());
        Ok(())
    })
}

/// Releases a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn frob_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
