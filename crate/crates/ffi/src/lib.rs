//! C interface to `crquad`.
//!
//! Models and polynomials are opaque handles created from JSON or text and
//! released with the matching `*_free` function. Every fallible call returns a
//! [`CrqStatus`]; on failure [`crq_last_error`] describes the error for the
//! calling thread. Strings handed out by the library must be released with
//! [`crq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use crquad::cranalysis::{cr_certificate, cr_dimension};
use crquad::extension::extend_polynomial;
use crquad::io::{parse_model_str, parse_poly_str, poly_to_json, LoadedModel};
use crquad::quadric::{classify_normal_form, find_elliptic_direction, ClassifyMode};
use crquad::{Error, Polynomial};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrqStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvariantViolation = 4,
    Degenerate = 5,
    DimensionMismatch = 6,
    NotCr = 10,
    NonExtendable = 11,
    NoSolution = 12,
    Failed = 20,
    Panic = 99,
}

impl From<&Error> for CrqStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse { .. } | Error::MalformedInput(_) => CrqStatus::ParseError,
            Error::InvariantViolation(_) | Error::NotO3 { .. } | Error::ContainsW => {
                CrqStatus::InvariantViolation
            }
            Error::Degenerate => CrqStatus::Degenerate,
            Error::DimensionMismatch { .. } => CrqStatus::DimensionMismatch,
            Error::NotCr { .. } => CrqStatus::NotCr,
            Error::NonExtendable { .. } => CrqStatus::NonExtendable,
            Error::NoSolution { .. } => CrqStatus::NoSolution,
            _ => CrqStatus::Failed,
        }
    }
}

/// Opaque model handle.
pub struct CrqModel {
    inner: LoadedModel,
}

/// Opaque polynomial handle.
pub struct CrqPoly {
    inner: Polynomial,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn fail(status: CrqStatus, msg: impl Into<String>) -> CrqStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> CrqStatus {
    fail(CrqStatus::from(&e), format!("{}: {e}", e.kind()))
}

/// Runs `f` with panics converted to [`CrqStatus::Panic`].
fn guard(f: impl FnOnce() -> CrqStatus) -> CrqStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(CrqStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CrqStatus> {
    if s.is_null() {
        return Err(fail(CrqStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(CrqStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> CrqStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            CrqStatus::Ok
        }
        Err(_) => fail(CrqStatus::Failed, "output contains an interior NUL"),
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(CrqStatus::NullArgument, concat!("null argument: ", stringify!($p)));
        })+
    };
}

/// Message for the last failed call on this thread, or NULL. The pointer stays
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn crq_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn crq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn crq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a model from its JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crq_model_from_json(
    json: *const c_char,
    out: *mut *mut CrqModel,
) -> CrqStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_model_str(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(CrqModel { inner }));
                CrqStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `model` must be NULL or a handle from [`crq_model_from_json`] not freed yet.
#[no_mangle]
pub unsafe extern "C" fn crq_model_free(model: *mut CrqModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of complex variables, or 0 for a NULL handle.
///
/// # Safety
/// `model` must be NULL or a live model handle.
#[no_mangle]
pub unsafe extern "C" fn crq_model_n(model: *const CrqModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.n())
}

/// Serializes the model back to JSON.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crq_model_to_json(
    model: *const CrqModel,
    out: *mut *mut c_char,
) -> CrqStatus {
    guard(|| {
        non_null!(model, out);
        write_string(out, (*model).inner.to_json())
    })
}

/// Parses a polynomial in `n` variables from text ("z1*zbar2 + 1/2*w") or
/// from a JSON polynomial file body.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crq_poly_parse(
    text: *const c_char,
    n: usize,
    out: *mut *mut CrqPoly,
) -> CrqStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_poly_str(text, n) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(CrqPoly { inner: p.poly }));
                CrqStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `poly` must be NULL or a polynomial handle not freed yet.
#[no_mangle]
pub unsafe extern "C" fn crq_poly_free(poly: *mut CrqPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Text form of a polynomial.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crq_poly_to_string(
    poly: *const CrqPoly,
    out: *mut *mut c_char,
) -> CrqStatus {
    guard(|| {
        non_null!(poly, out);
        write_string(out, (*poly).inner.to_string())
    })
}

/// JSON term-list form of a polynomial.
///
/// # Safety
/// `poly` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crq_poly_to_json(
    poly: *const CrqPoly,
    out: *mut *mut c_char,
) -> CrqStatus {
    guard(|| {
        non_null!(poly, out);
        write_string(out, poly_to_json(&(*poly).inner, None))
    })
}

/// Dimension of the degree-`degree` homogeneous CR polynomials on the quadric.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crq_cr_dimension(
    model: *const CrqModel,
    degree: u32,
    out: *mut usize,
) -> CrqStatus {
    guard(|| {
        non_null!(model, out);
        match cr_dimension((*model).inner.quadric(), degree) {
            Ok(d) => {
                *out = d;
                CrqStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Tests whether `poly` is CR on the model. When it is not and `certificate`
/// is non-NULL, a new handle holding the nonzero `L f` is stored there.
///
/// # Safety
/// `model` and `poly` must be live handles, `out` a valid pointer and
/// `certificate` NULL or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crq_is_cr(
    model: *const CrqModel,
    poly: *const CrqPoly,
    out: *mut bool,
    certificate: *mut *mut CrqPoly,
) -> CrqStatus {
    guard(|| {
        non_null!(model, poly, out);
        match cr_certificate(&(*model).inner.model, &(*poly).inner) {
            Ok(None) => {
                *out = true;
                CrqStatus::Ok
            }
            Ok(Some((_, lf))) => {
                *out = false;
                if !certificate.is_null() {
                    *certificate = Box::into_raw(Box::new(CrqPoly { inner: lf }));
                }
                CrqStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Holomorphic extension `F(z, w)` of a CR polynomial on the quadric.
///
/// # Safety
/// `model` and `poly` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crq_extend(
    model: *const CrqModel,
    poly: *const CrqPoly,
    out: *mut *mut CrqPoly,
) -> CrqStatus {
    guard(|| {
        non_null!(model, poly, out);
        match extend_polynomial((*model).inner.quadric(), &(*poly).inner) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(CrqPoly { inner: r.f_ext }));
                CrqStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Exact normal form as a JSON object with a "type" key.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crq_classify(model: *const CrqModel, out: *mut *mut c_char) -> CrqStatus {
    guard(|| {
        non_null!(model, out);
        match classify_normal_form((*model).inner.quadric(), ClassifyMode::Exact) {
            Ok(form) => write_string(
                out,
                serde_json::to_string(&form).expect("normal form serializes"),
            ),
            Err(e) => from_error(e),
        }
    })
}

/// Searches for an elliptic direction. `found` receives whether one exists;
/// when it does and `out` is non-NULL, the direction is written there as a
/// JSON array of `["re","im"]` pairs.
///
/// # Safety
/// `model` must be a live handle, `found` a valid pointer and `out` NULL or a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crq_find_elliptic_direction(
    model: *const CrqModel,
    found: *mut bool,
    out: *mut *mut c_char,
) -> CrqStatus {
    guard(|| {
        non_null!(model, found);
        match find_elliptic_direction((*model).inner.quadric()) {
            Ok(Some(c)) => {
                *found = true;
                if out.is_null() {
                    return CrqStatus::Ok;
                }
                write_string(
                    out,
                    serde_json::to_string(&c).expect("direction serializes"),
                )
            }
            Ok(None) => {
                *found = false;
                CrqStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
