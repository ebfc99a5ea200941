//! C interface to wcalc.
//!
//! Objects are opaque handles created by `*_parse` and released by the
//! matching `*_free`. Every fallible call returns an `int32_t` code; on
//! failure `wcalc_last_error` describes the error until the next call on the
//! same thread. Strings returned through `char **` are NUL-terminated JSON
//! owned by the caller and released with `wcalc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use serde_json::json;
use wcalc::cli::{render, run, sequence_dossier, weight_dossier, Cli, Format};
use wcalc::descriptor::{parse_matrix, parse_sequence, parse_weight};
use wcalc::matrix::chain::IDENTITY_TOL;
use wcalc::matrix::{check_all_matrix_conditions, Sense, WeightMatrix};
use wcalc::output::to_json;
use wcalc::quasi::{class_nq_verdict, matrix_nq_verdict};
use wcalc::seq::LogWeightSequence;
use wcalc::weight::{associated_function, WeightFunction};
use wcalc::{Error, Status};

pub const WCALC_OK: i32 = 0;
/// Null pointer, invalid UTF-8 or an out-of-range enum value.
pub const WCALC_ERR_INVALID_ARGUMENT: i32 = 1;
pub const WCALC_ERR_PARSE: i32 = 2;
pub const WCALC_ERR_PRECONDITION: i32 = 3;
pub const WCALC_ERR_CONSISTENCY: i32 = 4;
pub const WCALC_ERR_PANIC: i32 = 5;

pub const WCALC_HOLDS: i32 = 0;
pub const WCALC_FAILS: i32 = 1;
pub const WCALC_INCONCLUSIVE: i32 = 2;

pub const WCALC_ROUMIEU: i32 = 0;
pub const WCALC_BEURLING: i32 = 1;

/// (β3) search bound used by `wcalc_sequence_analyze`.
const Q_MAX: usize = 8;

pub struct WcalcSequence(LogWeightSequence);
pub struct WcalcWeight(WeightFunction);
pub struct WcalcMatrix(WeightMatrix);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

enum Failure {
    Invalid(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `body`, mapping errors and panics to codes.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> i32 {
    set_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => WCALC_OK,
        Ok(Err(Failure::Invalid(msg))) => {
            set_error(&msg);
            WCALC_ERR_INVALID_ARGUMENT
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(&e.to_string());
            e.exit_code()
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            WCALC_ERR_PANIC
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Invalid("null string".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure::Invalid(format!("invalid UTF-8: {e}")))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::Invalid("null handle".into()))
}

unsafe fn store<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Invalid("null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn store_json(out: *mut *mut c_char, json: String) -> Result<(), Failure> {
    let c = CString::new(json).map_err(|e| Failure::Invalid(e.to_string()))?;
    store(out, c.into_raw())
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Holds => WCALC_HOLDS,
        Status::Fails => WCALC_FAILS,
        Status::Inconclusive => WCALC_INCONCLUSIVE,
    }
}

/// Parses a sequence descriptor into a new handle.
///
/// # Safety
/// `descriptor` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcalc_sequence_parse(descriptor: *const c_char, pmax: usize, out: *mut *mut WcalcSequence) -> i32 {
    guard(|| {
        let seq = parse_sequence(text(descriptor)?, pmax)?;
        store(out, Box::into_raw(Box::new(WcalcSequence(seq))))
    })
}

/// # Safety
/// `seq` must come from `wcalc_sequence_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wcalc_sequence_free(seq: *mut WcalcSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Number of represented terms, pmax + 1.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcalc_sequence_len(seq: *const WcalcSequence, out: *mut usize) -> i32 {
    guard(|| store(out, handle(seq)?.0.log_values().len()))
}

/// log M_p; beyond the prefix the tail law is used when there is one.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcalc_sequence_log_value(seq: *const WcalcSequence, p: usize, out: *mut f64) -> i32 {
    guard(|| {
        let s = &handle(seq)?.0;
        let v = s.value_at(p).ok_or_else(|| {
            Error::DomainExceeded {
                requested: p as f64,
                limit: s.pmax() as f64,
            }
        })?;
        store(out, v)
    })
}

/// Condition dossier as JSON.
///
/// # Safety
/// `seq` must be a live handle and `json_out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcalc_sequence_analyze(seq: *const WcalcSequence, json_out: *mut *mut c_char) -> i32 {
    guard(|| {
        let s = &handle(seq)?.0;
        let verdicts = sequence_dossier(s, Q_MAX, IDENTITY_TOL)?;
        store_json(json_out, to_json(&json!({ "input": s.label(), "verdicts": verdicts }))?)
    })
}

/// (nq) of the class; `status_out` receives a `WCALC_HOLDS`-style code.
///
/// # Safety
/// `seq` must be a live handle and `status_out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcalc_sequence_nq(seq: *const WcalcSequence, status_out: *mut i32) -> i32 {
    guard(|| store(status_out, status_code(class_nq_verdict(&handle(seq)?.0)?.status)))
}

/// # Safety
/// `descriptor` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcalc_weight_parse(descriptor: *const c_char, pmax: usize, out: *mut *mut WcalcWeight) -> i32 {
    guard(|| {
        let w = parse_weight(text(descriptor)?, pmax)?;
        store(out, Box::into_raw(Box::new(WcalcWeight(w))))
    })
}

/// Associated function ω_M of a sequence.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcalc_weight_from_sequence(seq: *const WcalcSequence, out: *mut *mut WcalcWeight) -> i32 {
    guard(|| {
        let w = associated_function(&handle(seq)?.0)?;
        store(out, Box::into_raw(Box::new(WcalcWeight(w))))
    })
}

/// # Safety
/// `w` must come from a weight constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wcalc_weight_free(w: *mut WcalcWeight) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// ω(t).
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcalc_weight_omega(w: *const WcalcWeight, t: f64, out: *mut f64) -> i32 {
    guard(|| {
        let w = &handle(w)?.0;
        if !(t.is_finite() && t >= 0.0) {
            return Err(Failure::Invalid(format!("t = {t} is not a finite non-negative number")));
        }
        let limit = w.valid_to.exp();
        if t > limit {
            return Err(Error::DomainExceeded { requested: t, limit }.into());
        }
        store(out, w.omega(t))
    })
}

/// (ω0)–(ω7), (ω_nq) and (W) as JSON.
///
/// # Safety
/// `w` must be a live handle and `json_out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcalc_weight_analyze(w: *const WcalcWeight, json_out: *mut *mut c_char) -> i32 {
    guard(|| {
        let w = &handle(w)?.0;
        let verdicts = weight_dossier(w);
        store_json(json_out, to_json(&json!({ "input": w.label, "verdicts": verdicts }))?)
    })
}

/// # Safety
/// `descriptor` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcalc_matrix_parse(descriptor: *const c_char, pmax: usize, out: *mut *mut WcalcMatrix) -> i32 {
    guard(|| {
        let m = parse_matrix(text(descriptor)?, pmax)?;
        store(out, Box::into_raw(Box::new(WcalcMatrix(m))))
    })
}

/// # Safety
/// `m` must come from `wcalc_matrix_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wcalc_matrix_free(m: *mut WcalcMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Every matrix condition in both senses as JSON.
///
/// # Safety
/// `m` must be a live handle and `json_out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcalc_matrix_conditions(m: *const WcalcMatrix, json_out: *mut *mut c_char) -> i32 {
    guard(|| {
        let m = &handle(m)?.0;
        let verdicts = check_all_matrix_conditions(m);
        store_json(json_out, to_json(&json!({ "matrix": m.name, "verdicts": verdicts }))?)
    })
}

/// (nq) of the matrix class; `sense` is `WCALC_ROUMIEU` or `WCALC_BEURLING`.
///
/// # Safety
/// `m` must be a live handle and `status_out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcalc_matrix_nq(m: *const WcalcMatrix, sense: i32, status_out: *mut i32) -> i32 {
    guard(|| {
        let sense = match sense {
            WCALC_ROUMIEU => Sense::Roumieu,
            WCALC_BEURLING => Sense::Beurling,
            other => return Err(Failure::Invalid(format!("unknown sense {other}"))),
        };
        store(status_out, status_code(matrix_nq_verdict(&handle(m)?.0, sense)?.status))
    })
}

/// Runs a command-line invocation given as a JSON array of arguments (without
/// the program name) and returns its JSON report. `--out` and `--format` are
/// ignored: nothing is written to disk.
///
/// # Safety
/// `args_json` must be a NUL-terminated string and `json_out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcalc_run(args_json: *const c_char, json_out: *mut *mut c_char) -> i32 {
    guard(|| {
        let args: Vec<String> = serde_json::from_str(text(args_json)?).map_err(Error::from)?;
        let mut cli = Cli::from_args(args)?;
        cli.out = None;
        cli.format = Format::Json;
        let outcome = run(&cli)?;
        let (report, _) = render(&cli, &outcome)?;
        store_json(json_out, report.trim_end().to_string())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wcalc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn wcalc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn wcalc_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains NUL"),
    };
    VERSION.as_ptr()
}
