//! C interface. Objects cross the boundary as opaque handles; every call
//! returns an [`OperadicStatus`] and writes results through out-pointers.
//! Strings returned to the caller must be released with
//! [`operadic_string_free`]. After a non-OK status,
//! [`operadic_last_error`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use operadic::ainf::certify_ainf_d_squared;
use operadic::bm::{build_bm, certify_algebra, BmAlgebra};
use operadic::moduli::count_points_by_ideal;
use operadic::Error;

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperadicStatus {
    Ok = 0,
    /// The computation ran and found violations.
    Violation = 1,
    InvalidArgument = 2,
    BudgetExceeded = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Internal = 6,
}

/// A built `B_{m,r}`.
pub struct OperadicBm {
    inner: BmAlgebra,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn status_of(e: &Error) -> OperadicStatus {
    set_error(e.to_string());
    match e {
        Error::Budget { .. } => OperadicStatus::BudgetExceeded,
        _ => OperadicStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> OperadicStatus) -> OperadicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            OperadicStatus::Internal
        }
    }
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(std::ptr::null_mut(), CString::into_raw)
}

/// Library version as a static NUL-terminated string; do not free.
#[no_mangle]
pub extern "C" fn operadic_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread, or NULL. Valid until the
/// next call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn operadic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn operadic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs the command line `argv[0..argc]` (without the program name) and
/// returns the certificate JSON and the process exit code.
///
/// # Safety
/// `argv` must point to `argc` valid NUL-terminated strings; the out
/// pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn operadic_run(
    argc: usize,
    argv: *const *const c_char,
    out_json: *mut *mut c_char,
    out_exit_code: *mut i32,
) -> OperadicStatus {
    guard(|| {
        if (argc > 0 && argv.is_null()) || out_json.is_null() || out_exit_code.is_null() {
            set_error("null pointer");
            return OperadicStatus::NullPointer;
        }
        let mut args = vec!["operadic".to_string()];
        for k in 0..argc {
            let p = *argv.add(k);
            if p.is_null() {
                set_error("null argument");
                return OperadicStatus::NullPointer;
            }
            match CStr::from_ptr(p).to_str() {
                Ok(s) => args.push(s.to_string()),
                Err(_) => {
                    set_error("argument is not UTF-8");
                    return OperadicStatus::InvalidUtf8;
                }
            }
        }
        let out = operadic::cli::run(&args);
        *out_exit_code = out.code;
        *out_json = if out.certificate.is_empty() {
            std::ptr::null_mut()
        } else {
            to_c_string(String::from_utf8_lossy(&out.certificate).into_owned())
        };
        match out.code {
            0 => OperadicStatus::Ok,
            1 => OperadicStatus::Violation,
            _ => {
                set_error(out.message);
                OperadicStatus::InvalidArgument
            }
        }
    })
}

/// Builds `B_{m,r}`; free with [`operadic_bm_free`].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn operadic_bm_new(
    m: i64,
    r: usize,
    out: *mut *mut OperadicBm,
) -> OperadicStatus {
    guard(|| {
        if out.is_null() {
            set_error("null pointer");
            return OperadicStatus::NullPointer;
        }
        match build_bm(m, r) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(OperadicBm { inner }));
                OperadicStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `b` must come from [`operadic_bm_new`] and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn operadic_bm_free(b: *mut OperadicBm) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Degree of the generator `x_n`, `2 ≤ n ≤ r`.
///
/// # Safety
/// `b` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn operadic_bm_generator_degree(
    b: *const OperadicBm,
    n: usize,
    out: *mut i64,
) -> OperadicStatus {
    guard(|| {
        let (Some(b), false) = (b.as_ref(), out.is_null()) else {
            set_error("null pointer");
            return OperadicStatus::NullPointer;
        };
        if n < 2 || n > b.inner.r() {
            set_error(format!("generator index {n} outside 2..={}", b.inner.r()));
            return OperadicStatus::InvalidArgument;
        }
        *out = b.inner.degree(n);
        OperadicStatus::Ok
    })
}

/// Checks `d∘d = 0`; `Violation` if it fails.
///
/// # Safety
/// `b` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn operadic_bm_certify(b: *const OperadicBm) -> OperadicStatus {
    guard(|| {
        let Some(b) = b.as_ref() else {
            set_error("null pointer");
            return OperadicStatus::NullPointer;
        };
        match certify_algebra(&b.inner) {
            Ok(c) if c.ok => OperadicStatus::Ok,
            Ok(_) => OperadicStatus::Violation,
            Err(e) => status_of(&e),
        }
    })
}

/// The algebra as JSON; free with [`operadic_string_free`].
///
/// # Safety
/// `b` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn operadic_bm_to_json(
    b: *const OperadicBm,
    out: *mut *mut c_char,
) -> OperadicStatus {
    guard(|| {
        let (Some(b), false) = (b.as_ref(), out.is_null()) else {
            set_error("null pointer");
            return OperadicStatus::NullPointer;
        };
        *out = to_c_string(b.inner.to_json().to_string());
        OperadicStatus::Ok
    })
}

/// Checks `d∘d = 0` on every `μ_n`, `n ≤ max_arity`.
#[no_mangle]
pub extern "C" fn operadic_ainf_certify(max_arity: usize) -> OperadicStatus {
    guard(|| match certify_ainf_d_squared(max_arity) {
        Ok(c) if c.ok => OperadicStatus::Ok,
        Ok(_) => OperadicStatus::Violation,
        Err(e) => status_of(&e),
    })
}

/// Associative and unital point counts of `n`-dimensional structure
/// constants over `F_q`, by ideal evaluation.
///
/// # Safety
/// The out pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn operadic_moduli_count(
    n: usize,
    q: u64,
    budget: u64,
    out_assoc: *mut u64,
    out_unital: *mut u64,
) -> OperadicStatus {
    guard(|| {
        if out_assoc.is_null() || out_unital.is_null() {
            set_error("null pointer");
            return OperadicStatus::NullPointer;
        }
        if budget == 0 {
            set_error("budget must be positive");
            return OperadicStatus::InvalidArgument;
        }
        match count_points_by_ideal(n, q, u128::from(budget)) {
            Ok((a, u)) => {
                *out_assoc = a;
                *out_unital = u;
                OperadicStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}
