//! C ABI over `pseudodyn`.
//!
//! Models are opaque handles created from model-file JSON and released with
//! `pd_model_free`. Every fallible call returns a `PdStatus`; on failure the
//! message is available from `pd_last_error` on the same thread. Rationals
//! cross the boundary as NUL-terminated strings such as `"3/2"` or `"0.25"`.
//! Point sets are byte masks with one entry per point.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pseudodyn::cli::model::{hash_bytes, Model, ModelFile};
use pseudodyn::dynamics::{bowen_ball, dyn_ball, separated_count, SearchMode};
use pseudodyn::error::Error;
use pseudodyn::pseudogroup::{Depth, WordClosure};
use pseudodyn::rational::{format_rational, parse_rational, Rational};
use pseudodyn::space::PointSet;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PdStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Malformed JSON, labels, rationals or UTF-8.
    InvalidInput = 2,
    /// The model is well formed but the query's preconditions fail.
    Precondition = 3,
    /// The query exceeds a size limit of the library.
    Capability = 4,
    /// An output buffer is shorter than the number of points.
    BufferTooSmall = 5,
    /// The library panicked. The handle should not be used again.
    Internal = 6,
}

/// Opaque model handle.
pub struct PdModel {
    model: Model,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Fail(PdStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Precondition(_) | Error::MissingCore(_) => PdStatus::Precondition,
            Error::Capability(_) | Error::DepthExceeded { .. } => PdStatus::Capability,
            _ => PdStatus::InvalidInput,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(PdStatus::NullArgument, format!("`{what}` is null"))
}

/// Runs `f`, recording its error and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PdStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PdStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            PdStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(PdStatus::InvalidInput, format!("`{what}` is not UTF-8")))
}

unsafe fn rational(p: *const c_char, what: &str) -> Result<Rational, Fail> {
    Ok(parse_rational(text(p, what)?)?)
}

unsafe fn model<'a>(m: *const PdModel) -> Result<&'a Model, Fail> {
    m.as_ref().map(|m| &m.model).ok_or_else(|| null("model"))
}

fn point(model: &Model, x: usize) -> Result<usize, Fail> {
    let n = model.sys.space().len();
    if x < n {
        Ok(x)
    } else {
        Err(Error::PointOutOfRange { index: x, len: n }.into())
    }
}

unsafe fn write_mask(set: &PointSet, out: *mut u8, len: usize) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    let n = set.universe();
    if len < n {
        return Err(Fail(
            PdStatus::BufferTooSmall,
            format!("mask buffer holds {len} entries, {n} needed"),
        ));
    }
    let out = std::slice::from_raw_parts_mut(out, n);
    for (x, slot) in out.iter_mut().enumerate() {
        *slot = set.contains(x) as u8;
    }
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn pd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a model file and completes its generators with the identity and
/// inverses. On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_model_from_json(
    json: *const c_char,
    out: *mut *mut PdModel,
) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let json = text(json, "json")?;
        let model = ModelFile::parse(json)?.into_model(hash_bytes(json.as_bytes()))?;
        *out = Box::into_raw(Box::new(PdModel { model }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `model` must come from `pd_model_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pd_model_free(model: *mut PdModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of points, 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pd_point_count(model: *const PdModel) -> usize {
    model.as_ref().map_or(0, |m| m.model.sys.space().len())
}

/// Index of the point with the given label.
///
/// # Safety
/// `model` must be a live handle, `label` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pd_point_index(
    model: *const PdModel,
    label: *const c_char,
    out: *mut usize,
) -> PdStatus {
    guard(|| {
        let m = self::model(model)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = m.sys.space().index_of(text(label, "label")?)?;
        Ok(())
    })
}

/// Whether the system is good. Generators without a core make this a
/// precondition failure.
///
/// # Safety
/// `model` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pd_is_good(model: *const PdModel, out: *mut bool) -> PdStatus {
    guard(|| {
        let m = self::model(model)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = m.sys.goodness()?.good;
        Ok(())
    })
}

/// The dynamical ball of `x` of length `n` and radius `eps`, as a mask.
///
/// # Safety
/// `model` must be a live handle, `eps` NUL-terminated and `out` writable
/// for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn pd_dyn_ball(
    model: *const PdModel,
    x: usize,
    n: usize,
    eps: *const c_char,
    closed: bool,
    out: *mut u8,
    len: usize,
) -> PdStatus {
    guard(|| {
        let m = self::model(model)?;
        let x = point(m, x)?;
        let eps = rational(eps, "eps")?;
        let closure = WordClosure::build(&m.sys, Depth::Max(n))?;
        let ball = dyn_ball(&closure, x, n, &eps, closed)?;
        write_mask(&ball.members, out, len)
    })
}

/// The closed Bowen ball of `x` at scale `delta`, as a mask.
///
/// # Safety
/// `model` must be a live handle, `delta` NUL-terminated and `out`
/// writable for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn pd_bowen_ball(
    model: *const PdModel,
    x: usize,
    delta: *const c_char,
    out: *mut u8,
    len: usize,
) -> PdStatus {
    guard(|| {
        let m = self::model(model)?;
        let x = point(m, x)?;
        let delta = rational(delta, "delta")?;
        let ball = bowen_ball(&m.sys, x, &delta)?;
        write_mask(&ball.members, out, len)
    })
}

/// Bounds on the largest `(n, eps)`-separated set. Exact search gives
/// `lower == upper`.
///
/// # Safety
/// `model` must be a live handle, `eps` NUL-terminated, `lower` and `upper`
/// valid.
#[no_mangle]
pub unsafe extern "C" fn pd_separated_count(
    model: *const PdModel,
    n: usize,
    eps: *const c_char,
    exact: bool,
    lower: *mut usize,
    upper: *mut usize,
) -> PdStatus {
    guard(|| {
        let m = self::model(model)?;
        if lower.is_null() || upper.is_null() {
            return Err(null("lower/upper"));
        }
        let eps = rational(eps, "eps")?;
        let closure = WordClosure::build(&m.sys, Depth::Max(n))?;
        let mode = if exact {
            SearchMode::Exact
        } else {
            SearchMode::Greedy
        };
        let s = separated_count(&closure, n, &eps, mode)?;
        *lower = s.lower;
        *upper = s.upper;
        Ok(())
    })
}

/// Measure of a point mask as an exact rational string. The model needs a
/// measure. Release the string with `pd_string_free`.
///
/// # Safety
/// `model` must be a live handle, `mask` readable for `len` bytes and `out`
/// valid.
#[no_mangle]
pub unsafe extern "C" fn pd_measure_of(
    model: *const PdModel,
    mask: *const u8,
    len: usize,
    out: *mut *mut c_char,
) -> PdStatus {
    guard(|| {
        let m = self::model(model)?;
        if mask.is_null() || out.is_null() {
            return Err(null("mask/out"));
        }
        let mu =
            m.mu.as_ref()
                .ok_or_else(|| Fail(PdStatus::Precondition, "the model has no measure".into()))?;
        let n = m.sys.space().len();
        if len != n {
            return Err(Fail(
                PdStatus::InvalidInput,
                format!("mask has {len} entries, the space has {n} points"),
            ));
        }
        let mask = std::slice::from_raw_parts(mask, len);
        let set = PointSet::from_indices(n, (0..n).filter(|&x| mask[x] != 0));
        let s = CString::new(format_rational(&mu.of(&set))).expect("no NULs in rationals");
        *out = s.into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
