//! C ABI over the `twdeg` engine.
//!
//! Every entry point returns a [`TwdegStatus`]; outputs go through pointer
//! arguments. On failure a message is kept per thread and read with
//! [`twdeg_last_error_message`]. Groups are opaque [`TwdegPsl`] handles
//! released with [`twdeg_psl_free`]; strings returned by the library are
//! released with [`twdeg_string_free`].
//!
//! # Safety
//!
//! Pointer arguments must be null or valid for the access their name
//! implies: handles from [`twdeg_psl_new`] not yet freed, NUL-terminated
//! command strings, and writable output slots. Nulls are reported as
//! [`TwdegStatus::NullPointer`].
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use twdeg::group::{algo, Elem};
use twdeg::projline::Psl;
use twdeg::verify::{run_named, Context, Report, RunConfig};
use twdeg::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwdegStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BadOrder = 3,
    TooLarge = 4,
    UnknownCheck = 5,
    Io = 6,
    Internal = 7,
    Panic = 8,
}

/// A field order `q` with its enumerated `PSL(2,q)`.
pub struct TwdegPsl {
    inner: Psl,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TwdegStatus {
    match e {
        Error::BadOrder(_) | Error::NonPrime(_) => TwdegStatus::BadOrder,
        Error::TooLarge { .. } => TwdegStatus::TooLarge,
        Error::UnknownLemma(_) => TwdegStatus::UnknownCheck,
        Error::Io(_) => TwdegStatus::Io,
        Error::Parse(_) | Error::TrivialElement | Error::WrongCongruence(_) => {
            TwdegStatus::InvalidArgument
        }
        _ => TwdegStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (TwdegStatus, String)>) -> TwdegStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TwdegStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            TwdegStatus::Panic
        }
    }
}

fn fail(e: Error) -> (TwdegStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TwdegStatus, String) {
    (TwdegStatus::NullPointer, format!("{what} is null"))
}

fn handle<'a>(h: *const TwdegPsl) -> Result<&'a Psl, (TwdegStatus, String)> {
    // SAFETY: non-null handles come from `twdeg_psl_new` and stay valid until freed.
    unsafe { h.as_ref() }
        .map(|p| &p.inner)
        .ok_or_else(|| null("handle"))
}

fn element(t: &Psl, x: u32) -> Result<Elem, (TwdegStatus, String)> {
    if (x as usize) < t.group.order() {
        Ok(x)
    } else {
        Err((
            TwdegStatus::InvalidArgument,
            format!("element {x} out of range for order {}", t.group.order()),
        ))
    }
}

fn write_out<T>(out: *mut T, v: T) -> Result<(), (TwdegStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: checked non-null; the caller provides writable storage.
    unsafe { out.write(v) };
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn twdeg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds `PSL(2,q)`. Elements are indices `0..order`, with 0 the identity.
#[no_mangle]
pub unsafe extern "C" fn twdeg_psl_new(q: u32, out: *mut *mut TwdegPsl) -> TwdegStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let inner = Psl::new(q).map_err(fail)?;
        write_out(out, Box::into_raw(Box::new(TwdegPsl { inner })))
    })
}

/// Releases a handle; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn twdeg_psl_free(h: *mut TwdegPsl) {
    if !h.is_null() {
        // SAFETY: `h` came from `twdeg_psl_new` and is freed once.
        drop(unsafe { Box::from_raw(h) });
    }
}

#[no_mangle]
pub unsafe extern "C" fn twdeg_psl_order(h: *const TwdegPsl, out: *mut u64) -> TwdegStatus {
    guard(|| write_out(out, handle(h)?.group.order() as u64))
}

/// Order of the stabilizer of infinity.
#[no_mangle]
pub unsafe extern "C" fn twdeg_psl_point_stabilizer_order(
    h: *const TwdegPsl,
    out: *mut u64,
) -> TwdegStatus {
    guard(|| write_out(out, handle(h)?.p1.order() as u64))
}

/// `a * b`, acting first by `a`.
#[no_mangle]
pub unsafe extern "C" fn twdeg_psl_multiply(
    h: *const TwdegPsl,
    a: u32,
    b: u32,
    out: *mut u32,
) -> TwdegStatus {
    guard(|| {
        let t = handle(h)?;
        let (a, b) = (element(t, a)?, element(t, b)?);
        write_out(out, t.group.mul(a, b))
    })
}

#[no_mangle]
pub unsafe extern "C" fn twdeg_psl_inverse(
    h: *const TwdegPsl,
    a: u32,
    out: *mut u32,
) -> TwdegStatus {
    guard(|| {
        let t = handle(h)?;
        write_out(out, t.group.inv(element(t, a)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn twdeg_psl_element_order(
    h: *const TwdegPsl,
    a: u32,
    out: *mut u32,
) -> TwdegStatus {
    guard(|| {
        let t = handle(h)?;
        write_out(out, t.group.elem_order(element(t, a)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn twdeg_psl_centralizer_order(
    h: *const TwdegPsl,
    a: u32,
    out: *mut u64,
) -> TwdegStatus {
    guard(|| {
        let t = handle(h)?;
        write_out(
            out,
            algo::centralizer(&t.group, element(t, a)?).order() as u64,
        )
    })
}

/// Size of the conjugacy class of `a`.
#[no_mangle]
pub unsafe extern "C" fn twdeg_psl_class_size(
    h: *const TwdegPsl,
    a: u32,
    out: *mut u64,
) -> TwdegStatus {
    guard(|| {
        let t = handle(h)?;
        let c = algo::centralizer(&t.group, element(t, a)?);
        write_out(out, (t.group.order() / c.order()) as u64)
    })
}

/// Runs `table1`, `table2`, `table4`, `report` or a lemma id and returns the
/// JSON report in `out_json`. `q` and `m` of 0 select the defaults;
/// `passed` receives 1 iff no check failed.
#[no_mangle]
pub unsafe extern "C" fn twdeg_run(
    command: *const c_char,
    q: u32,
    m: u32,
    long_running: bool,
    out_json: *mut *mut c_char,
    passed: *mut i32,
) -> TwdegStatus {
    guard(|| {
        if command.is_null() {
            return Err(null("command"));
        }
        if out_json.is_null() || passed.is_null() {
            return Err(null("output pointer"));
        }
        // SAFETY: checked non-null; the caller passes a NUL-terminated string.
        let name = unsafe { CStr::from_ptr(command) }.to_str().map_err(|_| {
            (
                TwdegStatus::InvalidArgument,
                "command is not UTF-8".to_string(),
            )
        })?;
        let mut config = RunConfig {
            q: if q == 0 { Vec::new() } else { vec![q] },
            m: if m == 0 { Vec::new() } else { vec![m as usize] },
            long_running,
            ..RunConfig::default()
        };
        config.normalize().map_err(fail)?;
        let ctx = Context::new(config.clone()).map_err(fail)?;
        let results = run_named(&ctx, name).map_err(fail)?;
        let report = Report::new(config, results);
        let json = report.to_json().map_err(fail)?;
        let c = CString::new(json).map_err(|e| (TwdegStatus::Internal, e.to_string()))?;
        write_out(passed, i32::from(report.exit_code() == 0))?;
        write_out(out_json, c.into_raw())
    })
}

/// Releases a string returned by this library; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn twdeg_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: `s` came from `CString::into_raw` in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}
