//! C ABI over `univext`.
//!
//! Every function returns a [`UvxStatus`]; results go through out-pointers.
//! After a non-`Ok` status, `uvx_last_error_message` describes the failure
//! on the calling thread. Handles and strings returned here must be released
//! with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use univext::cohom::h2;
use univext::invforms::universal_form;
use univext::liealg::catalog;
use univext::suites::{run_suite, Suite, SuiteConfig};
use univext::{Error, LieAlgebra};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UvxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    UnknownAlgebra = 4,
    ValidationError = 5,
    ChecksFailed = 6,
    InvalidArgument = 7,
    Internal = 8,
}

/// Opaque handle to a Lie algebra.
pub struct UvxLieAlgebra {
    inner: LieAlgebra,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("interior nul bytes removed"));
}

fn status_of(e: &Error) -> UvxStatus {
    match e {
        Error::Parse(_) | Error::Json(_) => UvxStatus::ParseError,
        Error::UnknownAlgebra(_) => UvxStatus::UnknownAlgebra,
        Error::Violation { .. } | Error::InvalidAutomorphism(_) | Error::InvalidBundle(_) => UvxStatus::ValidationError,
        Error::DimensionMismatch { .. } => UvxStatus::InvalidArgument,
        _ => UvxStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), UvxStatus>) -> UvxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UvxStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            UvxStatus::Internal
        }
    }
}

fn fail(e: Error) -> UvxStatus {
    set_error(e.to_string());
    status_of(&e)
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, UvxStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(UvxStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        UvxStatus::InvalidUtf8
    })
}

unsafe fn handle<'a>(p: *const UvxLieAlgebra) -> Result<&'a LieAlgebra, UvxStatus> {
    if p.is_null() {
        set_error("null algebra handle");
        return Err(UvxStatus::NullPointer);
    }
    Ok(&(*p).inner)
}

fn check_out<T>(p: *mut T) -> Result<(), UvxStatus> {
    if p.is_null() {
        set_error("null output pointer");
        return Err(UvxStatus::NullPointer);
    }
    Ok(())
}

fn emit(g: LieAlgebra, out: *mut *mut UvxLieAlgebra) {
    unsafe { *out = Box::into_raw(Box::new(UvxLieAlgebra { inner: g })) };
}

/// Message for the last failure on this thread; empty if none. Valid until
/// the next call on the same thread.
#[no_mangle]
pub extern "C" fn uvx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Looks up a catalog algebra such as `"sl2"` or `"abelian(3)"`.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uvx_lie_algebra_from_name(name: *const c_char, out: *mut *mut UvxLieAlgebra) -> UvxStatus {
    guard(|| {
        check_out(out)?;
        let g = catalog(read_str(name)?).map_err(fail)?;
        emit(g, out);
        Ok(())
    })
}

/// Parses and validates a structure-constant JSON document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uvx_lie_algebra_from_json(json: *const c_char, out: *mut *mut UvxLieAlgebra) -> UvxStatus {
    guard(|| {
        check_out(out)?;
        let g = LieAlgebra::from_json_str(read_str(json)?).map_err(fail)?;
        g.validate().map_err(fail)?;
        emit(g, out);
        Ok(())
    })
}

/// # Safety
/// `alg` must come from a constructor above and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn uvx_lie_algebra_free(alg: *mut UvxLieAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// # Safety
/// `alg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uvx_lie_algebra_dim(alg: *const UvxLieAlgebra, out: *mut usize) -> UvxStatus {
    guard(|| {
        check_out(out)?;
        *out = handle(alg)?.dim();
        Ok(())
    })
}

/// `dim V_g` of the universal invariant form.
///
/// # Safety
/// `alg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uvx_universal_form_dim(alg: *const UvxLieAlgebra, out: *mut usize) -> UvxStatus {
    guard(|| {
        check_out(out)?;
        *out = universal_form(handle(alg)?).dim();
        Ok(())
    })
}

/// Dimensions of `Z²`, `B²` and `H²` with coefficients `ℚ^coeff_dim`.
///
/// # Safety
/// `alg` must be a live handle and the three out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn uvx_h2_dims(
    alg: *const UvxLieAlgebra,
    coeff_dim: usize,
    z2: *mut usize,
    b2: *mut usize,
    h2_dim: *mut usize,
) -> UvxStatus {
    guard(|| {
        check_out(z2)?;
        check_out(b2)?;
        check_out(h2_dim)?;
        let s = h2(handle(alg)?, coeff_dim);
        *z2 = s.dim_z2();
        *b2 = s.dim_b2();
        *h2_dim = s.dim();
        Ok(())
    })
}

/// Runs a suite and hands back its JSON report, which must be released with
/// `uvx_string_free`. Returns `ChecksFailed` when the report has a failing
/// check; the report is produced either way.
///
/// # Safety
/// `suite` must be a nul-terminated string and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uvx_verify(suite: *const c_char, window: i64, seed: u64, out_json: *mut *mut c_char) -> UvxStatus {
    guard(|| {
        check_out(out_json)?;
        let suite: Suite = read_str(suite)?.parse().map_err(fail)?;
        if window < 1 {
            set_error("window must be at least 1");
            return Err(UvxStatus::InvalidArgument);
        }
        let report = run_suite(suite, &SuiteConfig { window, seed }).map_err(fail)?;
        let text = CString::new(report.to_json()).map_err(|_| {
            set_error("report contains a nul byte");
            UvxStatus::Internal
        })?;
        *out_json = text.into_raw();
        match report.first_failure() {
            None => Ok(()),
            Some(c) => {
                set_error(format!("check failed: {}", c.check));
                Err(UvxStatus::ChecksFailed)
            }
        }
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn uvx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
