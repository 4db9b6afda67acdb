//! C ABI over the isolab library.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns an
//! [`IsolabStatus`]; the message for the last failure on the calling thread
//! is available from [`isolab_last_error`]. Strings returned to C are
//! NUL-terminated UTF-8 and must be released with [`isolab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use isolab::cli::{self, Command, RunConfig};
use isolab::invariants::{hodge_point, newton_point};
use isolab::{wire, Cocharacter, Error, FieldCtx, MatL};

/// Result codes. Values are stable; new codes are only appended.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsolabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    InsufficientPrecision = 5,
    NotInvertible = 6,
    DivideByZero = 7,
    NonPrime = 8,
    FieldTooLarge = 9,
    DegreeTooSmall = 10,
    LengthMismatch = 11,
    SumMismatch = 12,
    NotANewtonPoint = 13,
    Unrealizable = 14,
    SamplingExhausted = 15,
    BadHodgeProfile = 16,
    InvalidParams = 17,
    RangeError = 18,
    ZeroValuation = 19,
    Io = 20,
    Internal = 21,
    Panic = 22,
}

impl From<&Error> for IsolabStatus {
    fn from(e: &Error) -> IsolabStatus {
        match e {
            Error::NonPrime(_) => IsolabStatus::NonPrime,
            Error::FieldTooLarge { .. } => IsolabStatus::FieldTooLarge,
            Error::InvalidArgument(_) => IsolabStatus::InvalidArgument,
            Error::DivideByZero => IsolabStatus::DivideByZero,
            Error::InsufficientPrecision(_) => IsolabStatus::InsufficientPrecision,
            Error::ZeroValuation => IsolabStatus::ZeroValuation,
            Error::NotInvertible => IsolabStatus::NotInvertible,
            Error::DegreeTooSmall { .. } => IsolabStatus::DegreeTooSmall,
            Error::LengthMismatch { .. } => IsolabStatus::LengthMismatch,
            Error::SumMismatch { .. } => IsolabStatus::SumMismatch,
            Error::NotANewtonPoint(_) => IsolabStatus::NotANewtonPoint,
            Error::Unrealizable(_) => IsolabStatus::Unrealizable,
            Error::SamplingExhausted { .. } => IsolabStatus::SamplingExhausted,
            Error::BadHodgeProfile { .. } => IsolabStatus::BadHodgeProfile,
            Error::InvalidParams(_) => IsolabStatus::InvalidParams,
            Error::RangeError(_) => IsolabStatus::RangeError,
            Error::Parse(_) => IsolabStatus::Parse,
            Error::Io(_) => IsolabStatus::Io,
            Error::Internal(_) => IsolabStatus::Internal,
        }
    }
}

/// Coefficient field `F_{p^m}` with its working precision.
pub struct IsolabField(Arc<FieldCtx>);

/// Square matrix over `F_{p^m}((π))`.
pub struct IsolabMatrix(MatL);

/// Cocharacter with rational slopes in decreasing order.
pub struct IsolabCochar(Cocharacter);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: IsolabStatus, msg: &str) -> IsolabStatus {
    set_last_error(msg);
    status
}

fn fail_with(e: &Error) -> IsolabStatus {
    fail(e.into(), &e.to_string())
}

/// Run `f`, turning panics into [`IsolabStatus::Panic`].
fn guard(f: impl FnOnce() -> IsolabStatus) -> IsolabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| p.downcast_ref::<&str>().copied())
                .unwrap_or("panic");
            fail(IsolabStatus::Panic, &format!("internal panic: {msg}"))
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, IsolabStatus> {
    if s.is_null() {
        return Err(fail(IsolabStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(IsolabStatus::InvalidUtf8, "string argument is not valid UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> IsolabStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            IsolabStatus::Ok
        }
        Err(_) => fail(IsolabStatus::Internal, "output contains a NUL byte"),
    }
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> IsolabStatus {
    *out = Box::into_raw(Box::new(value));
    IsolabStatus::Ok
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(IsolabStatus::NullPointer, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn isolab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn isolab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn isolab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Create the field `F_{p^m}` with working precision `prec` (at least 8).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn isolab_field_new(p: u32, m: u32, prec: i64, out: *mut *mut IsolabField) -> IsolabStatus {
    non_null!(out);
    guard(|| {
        if prec < cli::MIN_PREC {
            return fail(IsolabStatus::InvalidArgument, &format!("precision must be at least {}", cli::MIN_PREC));
        }
        match FieldCtx::with_precision(p, m, prec) {
            Ok(ctx) => write_handle(out, IsolabField(ctx)),
            Err(e) => fail_with(&e),
        }
    })
}

/// # Safety
/// `field` must be null or a handle from [`isolab_field_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn isolab_field_free(field: *mut IsolabField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Parse a matrix from its JSON encoding (`{"n", "entries"}` or an array of rows).
///
/// # Safety
/// `field` must be a live handle, `json` a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isolab_matrix_from_json(
    field: *const IsolabField,
    json: *const c_char,
    out: *mut *mut IsolabMatrix,
) -> IsolabStatus {
    non_null!(field, out);
    guard(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let parsed = wire::parse_document(text).and_then(|v| wire::matrix_from_json(&(*field).0, &v, "$"));
        match parsed {
            Ok(b) => write_handle(out, IsolabMatrix(b)),
            Err(e) => fail_with(&e),
        }
    })
}

/// JSON encoding of a matrix; release with [`isolab_string_free`].
///
/// # Safety
/// `matrix` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isolab_matrix_to_json(matrix: *const IsolabMatrix, out: *mut *mut c_char) -> IsolabStatus {
    non_null!(matrix, out);
    guard(|| write_string(out, wire::matrix_to_json(&(*matrix).0).to_string()))
}

/// Number of rows.
///
/// # Safety
/// `matrix` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn isolab_matrix_size(matrix: *const IsolabMatrix) -> usize {
    if matrix.is_null() {
        0
    } else {
        (*matrix).0.n()
    }
}

/// # Safety
/// `matrix` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn isolab_matrix_free(matrix: *mut IsolabMatrix) {
    if !matrix.is_null() {
        drop(Box::from_raw(matrix));
    }
}

/// Hodge point (elementary divisor valuations).
///
/// # Safety
/// `matrix` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isolab_hodge_point(matrix: *const IsolabMatrix, out: *mut *mut IsolabCochar) -> IsolabStatus {
    non_null!(matrix, out);
    guard(|| match hodge_point(&(*matrix).0) {
        Ok(c) => write_handle(out, IsolabCochar(c)),
        Err(e) => fail_with(&e),
    })
}

/// Newton point of `bσ`.
///
/// # Safety
/// `matrix` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isolab_newton_point(matrix: *const IsolabMatrix, out: *mut *mut IsolabCochar) -> IsolabStatus {
    non_null!(matrix, out);
    guard(|| match newton_point(&(*matrix).0) {
        Ok(c) => write_handle(out, IsolabCochar(c)),
        Err(e) => fail_with(&e),
    })
}

/// Parse a cocharacter from a JSON array of `"num/den"` strings.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isolab_cochar_from_json(json: *const c_char, out: *mut *mut IsolabCochar) -> IsolabStatus {
    non_null!(out);
    guard(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match wire::parse_document(text).and_then(|v| wire::cochar_from_json(&v, "$")) {
            Ok(c) => write_handle(out, IsolabCochar(c)),
            Err(e) => fail_with(&e),
        }
    })
}

/// JSON array of slopes; release with [`isolab_string_free`].
///
/// # Safety
/// `cochar` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isolab_cochar_to_json(cochar: *const IsolabCochar, out: *mut *mut c_char) -> IsolabStatus {
    non_null!(cochar, out);
    guard(|| write_string(out, wire::cochar_to_json(&(*cochar).0).to_string()))
}

/// Number of slopes.
///
/// # Safety
/// `cochar` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn isolab_cochar_len(cochar: *const IsolabCochar) -> usize {
    if cochar.is_null() {
        0
    } else {
        (*cochar).0.len()
    }
}

/// Slope `index` (in decreasing order) as a reduced fraction `num/den`, `den > 0`.
///
/// # Safety
/// `cochar` must be a live handle; `num` and `den` writable.
#[no_mangle]
pub unsafe extern "C" fn isolab_cochar_slope(
    cochar: *const IsolabCochar,
    index: usize,
    num: *mut i64,
    den: *mut i64,
) -> IsolabStatus {
    non_null!(cochar, num, den);
    guard(|| match (*cochar).0.slopes().get(index) {
        Some(s) => {
            *num = *s.numer();
            *den = *s.denom();
            IsolabStatus::Ok
        }
        None => fail(IsolabStatus::RangeError, &format!("slope index {index} out of range")),
    })
}

/// Whether `a ≺ b` in the dominance order.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isolab_cochar_dominates(
    a: *const IsolabCochar,
    b: *const IsolabCochar,
    out: *mut bool,
) -> IsolabStatus {
    non_null!(a, b, out);
    guard(|| match (*a).0.dominates(&(*b).0) {
        Ok(v) => {
            *out = v;
            IsolabStatus::Ok
        }
        Err(e) => fail_with(&e),
    })
}

/// Distance `|a, b|` between the polygons as a reduced fraction.
///
/// # Safety
/// `a`, `b` must be live handles; `num` and `den` writable.
#[no_mangle]
pub unsafe extern "C" fn isolab_cochar_metric(
    a: *const IsolabCochar,
    b: *const IsolabCochar,
    num: *mut i64,
    den: *mut i64,
) -> IsolabStatus {
    non_null!(a, b, num, den);
    guard(|| match (*a).0.metric(&(*b).0) {
        Ok(d) => {
            *num = *d.numer();
            *den = *d.denom();
            IsolabStatus::Ok
        }
        Err(e) => fail_with(&e),
    })
}

/// # Safety
/// `cochar` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn isolab_cochar_free(cochar: *mut IsolabCochar) {
    if !cochar.is_null() {
        drop(Box::from_raw(cochar));
    }
}

/// Run a CLI command in-process.
///
/// `config_json` is an object whose keys match the long flags (`p`, `m`,
/// `prec`, `seed`, `depth`, `trials`, `kmax`, `e`, `n`, `level`, `format`)
/// plus `"in"` for the input document; it may be null for defaults. On
/// return `*out` holds the report, or an error document when the status is
/// not `Ok`; release it with [`isolab_string_free`].
///
/// # Safety
/// `command` must be a NUL-terminated string, `config_json` null or one, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn isolab_run_json(
    command: *const c_char,
    config_json: *const c_char,
    out: *mut *mut c_char,
) -> IsolabStatus {
    non_null!(out);
    *out = ptr::null_mut();
    guard(|| {
        let name = match read_str(command) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let cfg = if config_json.is_null() {
            Ok(RunConfig::default())
        } else {
            match read_str(config_json) {
                Ok(t) => wire::parse_document(t).and_then(|v| RunConfig::from_json(&v)),
                Err(s) => return s,
            }
        };
        let result = cfg.and_then(|cfg| Ok((name.parse::<Command>()?, cfg)));
        let (status, doc) = match result {
            Ok((cmd, cfg)) => match cli::dispatch(cmd, &cfg) {
                Ok(doc) => (IsolabStatus::Ok, doc),
                Err(e) => (fail_with(&e), cli::error_document(&e, &cfg)),
            },
            Err(e) => (fail_with(&e), cli::error_document(&e, &RunConfig::default())),
        };
        match write_string(out, serde_json::to_string_pretty(&doc).expect("values serialize")) {
            IsolabStatus::Ok => status,
            s => s,
        }
    })
}
