//! C interface to the almost-invariant library.
//!
//! Fields and subspaces are opaque handles created and released through this API. Every
//! entry point returns an [`AiStatus`]; on failure [`ai_last_error`] describes the problem.
//! Strings returned through out-parameters are owned by the caller and must be released
//! with [`ai_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use almost_invariant::io::{run_text, Kind};
use almost_invariant::verify::{verify_text, VerifyError};
use almost_invariant::{build_field, Error, Field, Matrix, Subspace};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AiStatus {
    Ok = 0,
    /// A certificate did not pass verification.
    VerifyFailed = 1,
    /// The input lies outside the hypotheses of the construction.
    Hypothesis = 2,
    /// Malformed or inconsistent input.
    InvalidInput = 3,
    /// Internal consistency failure.
    Internal = 4,
    NullPointer = 5,
    Panic = 6,
}

/// A finite field GF(p^n).
pub struct AiField {
    field: Field,
}

/// A subspace of GF(q)^d.
pub struct AiSubspace {
    space: Subspace,
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

fn status_of(e: &Error) -> AiStatus {
    match e.exit_code() {
        2 => AiStatus::Hypothesis,
        4 => AiStatus::Internal,
        _ => AiStatus::InvalidInput,
    }
}

fn fail(e: Error) -> AiStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn guard(f: impl FnOnce() -> AiStatus) -> AiStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("panic inside the library");
            AiStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, AiStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(AiStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        AiStatus::InvalidInput
    })
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            set_error("null pointer argument");
            return AiStatus::NullPointer;
        }
    };
}

/// Message for the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn ai_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates GF(p^n) with its canonical modulus.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ai_field_new(p: u32, n: u32, out: *mut *mut AiField) -> AiStatus {
    guard(|| {
        non_null!(out);
        match build_field(p, n) {
            Ok(field) => {
                *out = Box::into_raw(Box::new(AiField { field }));
                AiStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Number of elements of the field, or 0 for NULL.
///
/// # Safety
/// `field` must be NULL or a handle from [`ai_field_new`].
#[no_mangle]
pub unsafe extern "C" fn ai_field_order(field: *const AiField) -> u64 {
    field.as_ref().map_or(0, |f| f.field.order())
}

/// # Safety
/// `field` must be NULL or a handle from [`ai_field_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ai_field_free(field: *mut AiField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Span of `rows` vectors of length `cols`, stored row-major in `data`.
///
/// # Safety
/// `field` must be a live handle, `data` must hold `rows * cols` values (it may be NULL when
/// that product is 0), and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ai_subspace_span(
    field: *const AiField,
    data: *const u32,
    rows: usize,
    cols: usize,
    out: *mut *mut AiSubspace,
) -> AiStatus {
    guard(|| {
        non_null!(field, out);
        let Some(len) = rows.checked_mul(cols) else {
            set_error("rows * cols overflows");
            return AiStatus::InvalidInput;
        };
        if len > 0 && data.is_null() {
            set_error("null data with nonzero size");
            return AiStatus::NullPointer;
        }
        let values = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(data, len).to_vec() };
        match Matrix::from_entries(&(*field).field, rows, cols, values) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(AiSubspace { space: Subspace::span(&m) }));
                AiStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Dimension of the subspace, or 0 for NULL.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ai_subspace_dim(s: *const AiSubspace) -> usize {
    s.as_ref().map_or(0, |s| s.space.dim())
}

/// Dimension of the ambient space, or 0 for NULL.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ai_subspace_ambient_dim(s: *const AiSubspace) -> usize {
    s.as_ref().map_or(0, |s| s.space.ambient_dim())
}

unsafe fn binary(
    a: *const AiSubspace,
    b: *const AiSubspace,
    out: *mut *mut AiSubspace,
    op: fn(&Subspace, &Subspace) -> almost_invariant::Result<Subspace>,
) -> AiStatus {
    guard(|| {
        non_null!(a, b, out);
        match op(&(*a).space, &(*b).space) {
            Ok(space) => {
                *out = Box::into_raw(Box::new(AiSubspace { space }));
                AiStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `a + b`.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ai_subspace_sum(a: *const AiSubspace, b: *const AiSubspace, out: *mut *mut AiSubspace) -> AiStatus {
    binary(a, b, out, Subspace::sum)
}

/// `a ∩ b`.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ai_subspace_intersect(
    a: *const AiSubspace,
    b: *const AiSubspace,
    out: *mut *mut AiSubspace,
) -> AiStatus {
    binary(a, b, out, Subspace::intersect)
}

/// `dim a/(a ∩ b)`.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ai_subspace_quotient_dim(a: *const AiSubspace, b: *const AiSubspace, out: *mut usize) -> AiStatus {
    guard(|| {
        non_null!(a, b, out);
        match (*a).space.quotient_dim(&(*b).space) {
            Ok(q) => {
                *out = q;
                AiStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Copies the reduced row echelon basis, row-major, into `buf`, which must have room for
/// `dim * ambient_dim` values.
///
/// # Safety
/// `s` must be a live handle and `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn ai_subspace_basis(s: *const AiSubspace, buf: *mut u32, len: usize) -> AiStatus {
    guard(|| {
        non_null!(s);
        let entries = (*s).space.basis().entries();
        if len < entries.len() {
            set_error(format!("buffer holds {len} values, {} needed", entries.len()));
            return AiStatus::InvalidInput;
        }
        if !entries.is_empty() {
            non_null!(buf);
            ptr::copy_nonoverlapping(entries.as_ptr(), buf, entries.len());
        }
        AiStatus::Ok
    })
}

/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ai_subspace_free(s: *mut AiSubspace) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Runs an instance and writes its certificate JSON to `*out`. `kind` may be NULL when the
/// instance names its own kind.
///
/// # Safety
/// `instance_json` must be a NUL-terminated string, `kind` NULL or one, and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ai_run(kind: *const c_char, instance_json: *const c_char, out: *mut *mut c_char) -> AiStatus {
    guard(|| {
        non_null!(out);
        let instance = match text(instance_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let kind = if kind.is_null() {
            None
        } else {
            match text(kind).map(|k| k.parse::<Kind>()) {
                Ok(Ok(k)) => Some(k),
                Ok(Err(e)) => return fail(e),
                Err(s) => return s,
            }
        };
        match run_text(instance, kind, None) {
            Ok(cert) => match CString::new(cert.to_json()) {
                Ok(s) => {
                    *out = s.into_raw();
                    AiStatus::Ok
                }
                Err(_) => fail(Error::Internal("certificate contains a NUL byte".into())),
            },
            Err(e) => fail(e),
        }
    })
}

/// Checks a certificate against its instance. Returns `Ok` when every assertion holds and
/// `VerifyFailed` naming the first that does not.
///
/// # Safety
/// Both arguments must be NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn ai_verify(certificate_json: *const c_char, instance_json: *const c_char) -> AiStatus {
    guard(|| {
        let (cert, inst) = match (text(certificate_json), text(instance_json)) {
            (Ok(c), Ok(i)) => (c, i),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match verify_text(cert, inst) {
            Ok(_) => AiStatus::Ok,
            Err(VerifyError::Instance(e)) => fail(e),
            Err(e @ VerifyError::Failed(_)) => {
                set_error(e.to_string());
                AiStatus::VerifyFailed
            }
        }
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ai_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
