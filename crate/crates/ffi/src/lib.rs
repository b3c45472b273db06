//! C interface: operators as opaque handles, verification reports as JSON.
//!
//! Functions returning `int32_t` return [`QKDV_OK`] or a negative error code;
//! the message of the last error on the calling thread is available from
//! [`qkdv_last_error`]. Strings returned by the library are freed with
//! [`qkdv_string_free`], operators with [`qkdv_op_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qkdv::cli::{parse_args, parse_op, run, Output};
use qkdv::coeffs::QRat;
use qkdv::modering::Window;
use qkdv::opalg::{nth_root, Op};
use qkdv::Error;

pub const QKDV_OK: i32 = 0;
/// `qkdv_verify` ran, and at least one check failed.
pub const QKDV_CHECKS_FAILED: i32 = 1;
pub const QKDV_ERR_NULL: i32 = -1;
pub const QKDV_ERR_UTF8: i32 = -2;
pub const QKDV_ERR_PARSE: i32 = -3;
pub const QKDV_ERR_CONFIG: i32 = -4;
pub const QKDV_ERR_COMPUTE: i32 = -5;
pub const QKDV_ERR_PANIC: i32 = -6;

/// An operator with exact `Q(q)` coefficients.
pub struct QkdvOp(Op<QRat>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => QKDV_ERR_PARSE,
            Error::Config(_) | Error::WindowTooSmall(_) => QKDV_ERR_CONFIG,
            _ => QKDV_ERR_COMPUTE,
        };
        Fail(code, e.to_string())
    }
}

/// Runs `f`, turning errors and panics into a code plus the thread's last error.
fn guard(f: impl FnOnce() -> Result<i32, Fail>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(code)) => code,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned());
            set_error(format!("panic: {}", msg.unwrap_or_default()));
            QKDV_ERR_PANIC
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(QKDV_ERR_NULL, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(QKDV_ERR_UTF8, format!("{what} is not UTF-8")))
}

unsafe fn op_arg<'a>(p: *const QkdvOp) -> Result<&'a Op<QRat>, Fail> {
    p.as_ref()
        .map(|o| &o.0)
        .ok_or_else(|| Fail(QKDV_ERR_NULL, "operator is null".into()))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut()
        .ok_or_else(|| Fail(QKDV_ERR_NULL, "output pointer is null".into()))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qkdv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses an operator over the point window `|mode| <= m_pt` with depth `k`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qkdv_op_parse(
    text: *const c_char,
    m_pt: i32,
    k: i32,
    out: *mut *mut QkdvOp,
) -> i32 {
    guard(|| {
        let out = out_arg(out)?;
        let w = Window::point(m_pt, k);
        w.validate()?;
        let op = parse_op::<QRat>(str_arg(text, "text")?, w)?;
        *out = Box::into_raw(Box::new(QkdvOp(op)));
        Ok(QKDV_OK)
    })
}

/// Canonical text of `op`; parses back to the same operator. Null on error.
///
/// # Safety
/// `op` must come from this library and not be freed.
#[no_mangle]
pub unsafe extern "C" fn qkdv_op_to_string(op: *const QkdvOp) -> *mut c_char {
    let mut s = None;
    guard(|| {
        s = Some(op_arg(op)?.to_string());
        Ok(QKDV_OK)
    });
    s.map_or(ptr::null_mut(), c_string)
}

/// `op^{1/n}` to depth `k`; `op` must be `D^n + ...`.
///
/// # Safety
/// `op` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qkdv_op_nth_root(
    op: *const QkdvOp,
    n: u32,
    k: i32,
    out: *mut *mut QkdvOp,
) -> i32 {
    guard(|| {
        let out = out_arg(out)?;
        let root = nth_root(op_arg(op)?, n, k)?;
        *out = Box::into_raw(Box::new(QkdvOp(root)));
        Ok(QKDV_OK)
    })
}

/// # Safety
/// `op` must come from this library or be null; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qkdv_op_free(op: *mut QkdvOp) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Runs the suite `kdv`, `mkdv`, `toda`, `poisson`, `limits` or `all` and
/// stores its JSON report in `json_out`. Returns [`QKDV_OK`] when every
/// check passes and [`QKDV_CHECKS_FAILED`] otherwise.
///
/// # Safety
/// `suite` must be a nul-terminated string and `json_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qkdv_verify(
    suite: *const c_char,
    n: u16,
    m_pt: i32,
    json_out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let out = out_arg(json_out)?;
        let suite = str_arg(suite, "suite")?;
        let args = [
            "qkdv",
            "verify",
            suite,
            "--N",
            &n.to_string(),
            "--window",
            &m_pt.to_string(),
        ];
        let cfg = parse_args(args)?;
        let Output::Report(r) = run(&cfg)? else {
            return Err(Fail(QKDV_ERR_COMPUTE, "verify produced no report".into()));
        };
        *out = c_string(r.to_json());
        Ok(if r.pass { QKDV_OK } else { QKDV_CHECKS_FAILED })
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn qkdv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
