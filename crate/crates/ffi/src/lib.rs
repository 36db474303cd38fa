//! C interface to `tcurve`.
//!
//! Every function returns a [`TcStatus`]; on failure the message is kept in
//! thread-local storage and read with [`tc_last_error`]. Handles are opaque
//! and each has a matching `_free` function. Sign strings are NUL-terminated
//! `'0'`/`'1'` strings in lattice point order.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tcurve::builtin::builtin;
use tcurve::classify::Classifier;
use tcurve::enumeration::{sample, sweep, SweepOptions, SweepRange, SweepReport};
use tcurve::io::{read_triangulation, write_report_jsonl, ReportParams};
use tcurve::{Error, SignDistribution, Triangulation};

/// Status codes; 2, 3 and 4 match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidInput = 2,
    InvariantViolation = 3,
    BudgetExceeded = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Numeric part of a classification; the scheme string is read with
/// [`tc_classifier_scheme`].
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TcClassification {
    pub oval_count: u32,
    pub region_count: u32,
    pub has_pseudoline: bool,
}

pub struct TcTriangulation(Triangulation);

/// A classifier bound to one triangulation, with its own scratch space.
/// Not safe to share between threads; create one per thread.
pub struct TcClassifier {
    inner: Classifier,
    scheme: CString,
}

pub struct TcReport {
    report: SweepReport,
    params: ReportParams,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> TcStatus {
    match e.exit_code() {
        3 => TcStatus::InvariantViolation,
        4 => TcStatus::BudgetExceeded,
        _ => TcStatus::InvalidInput,
    }
}

fn fail(status: TcStatus, msg: &str) -> TcStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), TcStatus>) -> TcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TcStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(TcStatus::Panic, "internal panic"),
    }
}

fn check<T>(r: tcurve::Result<T>) -> Result<T, TcStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, TcStatus> {
    if p.is_null() {
        return Err(fail(TcStatus::NullArgument, &format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(TcStatus::InvalidInput, &format!("{what} is not UTF-8")))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, TcStatus> {
    p.as_ref()
        .ok_or_else(|| fail(TcStatus::NullArgument, &format!("{what} is null")))
}

fn out_ptr<T>(out: *mut *mut T) -> Result<(), TcStatus> {
    if out.is_null() {
        return Err(fail(TcStatus::NullArgument, "output pointer is null"));
    }
    Ok(())
}

/// Message of the last failed call on this thread, empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses triangulation JSON; `validate = false` skips the unimodularity
/// checks.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_triangulation_from_json(
    json: *const c_char,
    validate: bool,
    out: *mut *mut TcTriangulation,
) -> TcStatus {
    guard(|| {
        out_ptr(out)?;
        let t = check(read_triangulation(text(json, "json")?, validate))?;
        *out = Box::into_raw(Box::new(TcTriangulation(t)));
        Ok(())
    })
}

/// Loads `bowtie8`, `fig2-middle8`, `fig2-right8` or `delaunay-<d>`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_triangulation_builtin(
    name: *const c_char,
    out: *mut *mut TcTriangulation,
) -> TcStatus {
    guard(|| {
        out_ptr(out)?;
        let t = check(builtin(text(name, "name")?))?;
        *out = Box::into_raw(Box::new(TcTriangulation(t)));
        Ok(())
    })
}

/// Degree of `t`, or 0 when `t` is null.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_triangulation_degree(t: *const TcTriangulation) -> u32 {
    t.as_ref().map_or(0, |t| t.0.degree())
}

/// # Safety
/// `t` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_triangulation_free(t: *mut TcTriangulation) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_classifier_new(
    t: *const TcTriangulation,
    out: *mut *mut TcClassifier,
) -> TcStatus {
    guard(|| {
        out_ptr(out)?;
        let t = get(t, "triangulation")?;
        *out = Box::into_raw(Box::new(TcClassifier {
            inner: Classifier::new(&t.0),
            scheme: CString::default(),
        }));
        Ok(())
    })
}

/// Classifies one sign string.
///
/// # Safety
/// `c` must be a live handle, `signs` a NUL-terminated string and `out` null
/// or writable.
#[no_mangle]
pub unsafe extern "C" fn tc_classifier_classify(
    c: *mut TcClassifier,
    signs: *const c_char,
    out: *mut TcClassification,
) -> TcStatus {
    guard(|| {
        let c = c
            .as_mut()
            .ok_or_else(|| fail(TcStatus::NullArgument, "classifier is null"))?;
        let s = check(SignDistribution::parse(
            c.inner.degree(),
            text(signs, "signs")?,
        ))?;
        let r = check(c.inner.classify(&s))?;
        c.scheme = CString::new(r.scheme).expect("scheme strings are ASCII");
        if let Some(out) = out.as_mut() {
            *out = TcClassification {
                oval_count: r.oval_count as u32,
                region_count: r.region_count as u32,
                has_pseudoline: r.has_pseudoline,
            };
        }
        Ok(())
    })
}

/// Copies the scheme of the last successful classification into `buf`
/// with a trailing NUL. `len` receives the string length without the NUL;
/// when `cap <= len` nothing is copied and `BufferTooSmall` is returned.
///
/// # Safety
/// `c` must be a live handle, `buf` null or writable for `cap` bytes, `len`
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn tc_classifier_scheme(
    c: *const TcClassifier,
    buf: *mut c_char,
    cap: usize,
    len: *mut usize,
) -> TcStatus {
    guard(|| {
        let c = get(c, "classifier")?;
        let bytes = c.scheme.as_bytes_with_nul();
        if let Some(len) = len.as_mut() {
            *len = bytes.len() - 1;
        }
        if buf.is_null() || cap < bytes.len() {
            return Err(fail(
                TcStatus::BufferTooSmall,
                "buffer too small for the scheme",
            ));
        }
        ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, bytes.len());
        Ok(())
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_classifier_free(c: *mut TcClassifier) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

fn options(workers: u32, raw: bool) -> SweepOptions {
    SweepOptions {
        workers: workers.max(1) as usize,
        raw,
        ..Default::default()
    }
}

/// Classifies sign indices `start..end`; `end = UINT64_MAX` means the end of
/// the index space.
///
/// # Safety
/// `t` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_sweep(
    t: *const TcTriangulation,
    start: u64,
    end: u64,
    workers: u32,
    raw: bool,
    out: *mut *mut TcReport,
) -> TcStatus {
    guard(|| {
        out_ptr(out)?;
        let t = &get(t, "triangulation")?.0;
        let full = check(SweepRange::full(t.degree(), raw))?;
        let end = if end == u64::MAX {
            full.end
        } else {
            end as u128
        };
        let range = SweepRange::new(start as u128, end);
        let report = check(sweep(t, range, &options(workers, raw)))?;
        let params = ReportParams::Sweep {
            start: range.start,
            end: range.end,
        };
        *out = Box::into_raw(Box::new(TcReport { report, params }));
        Ok(())
    })
}

/// Classifies `n` indices drawn from the stream keyed by `seed`.
///
/// # Safety
/// `t` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_sample(
    t: *const TcTriangulation,
    n: u64,
    seed: u64,
    workers: u32,
    raw: bool,
    out: *mut *mut TcReport,
) -> TcStatus {
    guard(|| {
        out_ptr(out)?;
        let t = &get(t, "triangulation")?.0;
        let report = check(sample(t, n, seed, &options(workers, raw)))?;
        *out = Box::into_raw(Box::new(TcReport {
            report,
            params: ReportParams::Sample { n, seed },
        }));
        Ok(())
    })
}

/// Number of classified sign vectors, or 0 when `r` is null.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_report_total(r: *const TcReport) -> u64 {
    r.as_ref().map_or(0, |r| r.report.total)
}

/// Number of distinct schemes, or 0 when `r` is null.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tc_report_scheme_count(r: *const TcReport) -> usize {
    r.as_ref().map_or(0, |r| r.report.schemes.len())
}

/// Copies the oval-count histogram (bins `0..=M(d)`) into `buf`. `len`
/// receives the bin count; `BufferTooSmall` when `cap` is less.
///
/// # Safety
/// `r` must be a live handle, `buf` null or writable for `cap` values, `len`
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn tc_report_histogram(
    r: *const TcReport,
    buf: *mut u64,
    cap: usize,
    len: *mut usize,
) -> TcStatus {
    guard(|| {
        let h = &get(r, "report")?.report.histogram;
        if let Some(len) = len.as_mut() {
            *len = h.len();
        }
        if buf.is_null() || cap < h.len() {
            return Err(fail(
                TcStatus::BufferTooSmall,
                "buffer too small for the histogram",
            ));
        }
        ptr::copy_nonoverlapping(h.as_ptr(), buf, h.len());
        Ok(())
    })
}

/// The report as JSON Lines in a new string, freed with
/// [`tc_string_free`].
///
/// # Safety
/// `r` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn tc_report_jsonl(r: *const TcReport, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        out_ptr(out)?;
        let r = get(r, "report")?;
        let text = check(write_report_jsonl(&r.report, &r.params))?;
        *out = CString::new(text)
            .expect("JSON has no NUL bytes")
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_report_free(r: *mut TcReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
