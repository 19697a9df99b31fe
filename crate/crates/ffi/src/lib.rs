//! C ABI for `refbloch`.
//!
//! Every fallible function returns an [`RbStatus`]; on failure the message is
//! available from [`rb_last_error_message`] on the same thread. Strings handed
//! out by the library are owned by the caller and released with
//! [`rb_string_free`]. Handles are released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use refbloch::bloch::verify::{cyclic_order, run_suite, Suite};
use refbloch::bloch::BlochField;
use refbloch::cli;
use refbloch::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidField = 3,
    PrecisionExhausted = 4,
    /// A verification ran and some check failed; the report is still returned.
    CheckFailed = 5,
    Internal = 6,
    Panic = 7,
}

/// A finite field together with its pre-Bloch data.
pub struct RbField {
    inner: BlochField,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RbStatus {
    match e {
        Error::InvalidField(_) => RbStatus::InvalidField,
        Error::Config(_) | Error::Domain(_) | Error::DivisionByZero => RbStatus::InvalidArgument,
        Error::PrecisionExhausted(_) => RbStatus::PrecisionExhausted,
        _ => RbStatus::Internal,
    }
}

fn fail(e: Error) -> RbStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

/// Runs `f`, converting panics to [`RbStatus::Panic`].
fn guard(f: impl FnOnce() -> RbStatus) -> RbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            RbStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, RbStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(RbStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        RbStatus::InvalidArgument
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s).expect("json has no nul").into_raw();
}

/// Copy of the last error message on this thread, or NULL if none.
/// Free with `rb_string_free`.
#[no_mangle]
pub extern "C" fn rb_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates the field of order `q`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_field_new(q: u64, out: *mut *mut RbField) -> RbStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return RbStatus::NullPointer;
        }
        match BlochField::of_order(q) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(RbField { inner: f }));
                RbStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `field` must come from `rb_field_new` and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn rb_field_free(field: *mut RbField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// The field size `q`, or 0 for NULL.
///
/// # Safety
/// `field` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rb_field_order(field: *const RbField) -> u64 {
    field.as_ref().map_or(0, |f| u64::from(f.inner.q()))
}

/// Order of the cyclic group `B(F_q)`.
///
/// # Safety
/// `field` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_field_bloch_order(field: *const RbField, out: *mut u64) -> RbStatus {
    guard(|| {
        let (Some(f), false) = (field.as_ref(), out.is_null()) else {
            set_error("null argument");
            return RbStatus::NullPointer;
        };
        match f.inner.bloch_group() {
            Ok(b) => match cyclic_order(&b.presentation.invariants()) {
                Some(n) => {
                    *out = n;
                    RbStatus::Ok
                }
                None => {
                    set_error("B(F) is not cyclic");
                    RbStatus::Internal
                }
            },
            Err(e) => fail(e),
        }
    })
}

/// Invariant factors of `P(F_q)` as a JSON object.
///
/// # Safety
/// `field` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_field_prebloch_json(field: *const RbField, out_json: *mut *mut c_char) -> RbStatus {
    guard(|| {
        let (Some(f), false) = (field.as_ref(), out_json.is_null()) else {
            set_error("null argument");
            return RbStatus::NullPointer;
        };
        let inv = f.inner.prebloch_presentation().invariants();
        let v = serde_json::json!({"invariants": inv, "odd_part": inv.odd_part(), "text": inv.to_string()});
        write_string(out_json, v.to_string());
        RbStatus::Ok
    })
}

/// Runs one verification suite (`lambda`, `suslin`, `constants`, `df`,
/// `pb`, `eigen`) and writes its JSON report. Returns `CheckFailed` with the
/// report filled in when a gating check fails.
///
/// # Safety
/// `field` must be a live handle, `suite` a NUL-terminated string and
/// `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rb_field_verify_json(
    field: *const RbField,
    suite: *const c_char,
    out_json: *mut *mut c_char,
) -> RbStatus {
    guard(|| {
        let (Some(f), false) = (field.as_ref(), out_json.is_null()) else {
            set_error("null argument");
            return RbStatus::NullPointer;
        };
        let suite: Suite = match read_str(suite).map(str::parse) {
            Ok(Ok(s)) => s,
            Ok(Err(e)) => return fail(e),
            Err(s) => return s,
        };
        match run_suite(&f.inner, suite) {
            Ok(r) => {
                let passed = r.passed();
                write_string(out_json, serde_json::to_string(&r).expect("serializable"));
                if passed {
                    RbStatus::Ok
                } else {
                    set_error(format!("suite {suite} failed"));
                    RbStatus::CheckFailed
                }
            }
            Err(e) => fail(e),
        }
    })
}

/// Runs a command-line invocation (without the program name), e.g.
/// `{"tower", "--base", "5", "--levels", "2"}`, and writes the JSON report.
/// `BLOCH_MAX_Q` is honoured. The report is written for `Ok` and `CheckFailed`.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rb_run_json(argv: *const *const c_char, argc: usize, out_json: *mut *mut c_char) -> RbStatus {
    guard(|| {
        if out_json.is_null() || (argv.is_null() && argc > 0) {
            set_error("null argument");
            return RbStatus::NullPointer;
        }
        let mut args = vec!["refbloch".to_string()];
        for i in 0..argc {
            match read_str(*argv.add(i)) {
                Ok(s) => args.push(s.to_string()),
                Err(s) => return s,
            }
        }
        let report = match cli::run_args(&args) {
            Ok((r, _)) => r,
            Err(e) => return fail(e),
        };
        write_string(out_json, serde_json::to_string(&report).expect("serializable"));
        if report.passed {
            RbStatus::Ok
        } else {
            set_error("a check failed");
            RbStatus::CheckFailed
        }
    })
}
