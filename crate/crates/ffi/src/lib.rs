//! C ABI over the fanoci checker and bound ledger.
//!
//! Every call returns a [`FanociStatus`]. Strings handed out by the library
//! are owned by the caller and released with [`fanoci_string_free`]. On a
//! non-ok status, [`fanoci_last_error`] describes the failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fanoci::bounds::{condition_bound, theorem02_minimum, BoundTag};
use fanoci::conditions::{CheckOptions, Verdict};
use fanoci::harness::{check_document, classify_document, gb_document, GbDocument, PairDocument};
use fanoci::Error;

/// Outcome of a call. The first four values match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FanociStatus {
    /// Success; for checks, a pass or partial verdict.
    Ok = 0,
    /// A check ran and some condition failed.
    Fail = 1,
    InputError = 2,
    BudgetExceeded = 3,
    NullPointer = 4,
    /// A panic was caught at the boundary.
    Internal = 5,
}

/// A parsed pair document.
pub struct FanociPair {
    doc: PairDocument,
}

/// The per-condition codimension bounds at `(M, d1, d2)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FanociLedger {
    pub m: u32,
    pub d1: u32,
    pub d2: u32,
    pub r01_irred: i64,
    pub r01_rank: i64,
    pub r02: i64,
    pub r1: i64,
    /// Shared by R2.2 and R3.2.
    pub r22: i64,
    pub r21: i64,
    pub r31: i64,
    pub minimum: i64,
    pub target: i64,
    /// Every required ledger check holds.
    pub ok: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn fail(status: FanociStatus, msg: impl Into<String>) -> FanociStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> FanociStatus {
    let status = match e {
        Error::BudgetExceeded { .. } => FanociStatus::BudgetExceeded,
        _ => FanociStatus::InputError,
    };
    fail(status, e.to_string())
}

fn from_verdict(v: Verdict) -> FanociStatus {
    match v {
        Verdict::Pass | Verdict::Partial => FanociStatus::Ok,
        Verdict::Fail => FanociStatus::Fail,
        Verdict::BudgetExceeded => FanociStatus::BudgetExceeded,
    }
}

/// Runs `f`, clearing the last error first and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> FanociStatus) -> FanociStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(FanociStatus::Internal, format!("internal error: {msg}"))
        }
    }
}

/// # Safety
/// `s` must be null or a valid nul-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, FanociStatus> {
    if s.is_null() {
        return Err(fail(FanociStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(FanociStatus::InputError, "argument is not valid UTF-8"))
}

/// # Safety
/// `out` must be null or valid for one pointer write.
unsafe fn write_string(out: *mut *mut c_char, s: String) -> FanociStatus {
    if out.is_null() {
        return fail(FanociStatus::NullPointer, "null output pointer");
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            FanociStatus::Ok
        }
        Err(_) => fail(FanociStatus::Internal, "report contains a nul byte"),
    }
}

fn to_i64(v: i128) -> Result<i64, FanociStatus> {
    i64::try_from(v).map_err(|_| {
        fail(
            FanociStatus::InputError,
            format!("value {v} does not fit in 64 bits"),
        )
    })
}

/// Message for the last non-ok status on this thread, or null. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn fanoci_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fanoci_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a pair document (JSON) into a new handle stored in `*out`.
///
/// # Safety
/// `json` must be a valid nul-terminated string; `out` must be valid for one
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn fanoci_pair_from_json(
    json: *const c_char,
    out: *mut *mut FanociPair,
) -> FanociStatus {
    guard(|| {
        if out.is_null() {
            return fail(FanociStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match PairDocument::from_json(text) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(FanociPair { doc }));
                FanociStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `pair` must be null or a handle from [`fanoci_pair_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fanoci_pair_free(pair: *mut FanociPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Runs every condition on the pair at its listed points, or at up to
/// `sample` sampled points when it lists none. The report (JSON) goes to
/// `*out_json` whenever the check ran; the status carries the verdict.
///
/// # Safety
/// `pair` must be a live handle; `out_json` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn fanoci_pair_check(
    pair: *const FanociPair,
    budget: usize,
    seed: u64,
    sample: usize,
    out_json: *mut *mut c_char,
) -> FanociStatus {
    guard(|| {
        let Some(pair) = pair.as_ref() else {
            return fail(FanociStatus::NullPointer, "null pair handle");
        };
        let opts = CheckOptions {
            budget,
            seed,
            ..CheckOptions::default()
        };
        match check_document(&pair.doc, &[], sample, &opts) {
            Ok(report) => {
                let json = serde_json::to_string(&report).expect("report serializes");
                match write_string(out_json, json) {
                    FanociStatus::Ok => from_verdict(report.overall),
                    s => s,
                }
            }
            Err(e) => from_error(e),
        }
    })
}

/// Classifies the pair's listed points; the result is a JSON array.
///
/// # Safety
/// `pair` must be a live handle; `out_json` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn fanoci_pair_classify(
    pair: *const FanociPair,
    out_json: *mut *mut c_char,
) -> FanociStatus {
    guard(|| {
        let Some(pair) = pair.as_ref() else {
            return fail(FanociStatus::NullPointer, "null pair handle");
        };
        match classify_document(&pair.doc, &[]) {
            Ok(points) => write_string(
                out_json,
                serde_json::to_string(&points).expect("points serialize"),
            ),
            Err(e) => from_error(e),
        }
    })
}

/// Reduced Gröbner basis of an ideal document (JSON in, JSON out).
///
/// # Safety
/// `json` must be a valid nul-terminated string; `out_json` must be valid for
/// one pointer write.
#[no_mangle]
pub unsafe extern "C" fn fanoci_groebner_json(
    json: *const c_char,
    budget: usize,
    out_json: *mut *mut c_char,
) -> FanociStatus {
    guard(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match GbDocument::from_json(text).and_then(|doc| gb_document(&doc, budget)) {
            Ok(r) => write_string(
                out_json,
                serde_json::to_string(&r).expect("report serializes"),
            ),
            Err(e) => from_error(e),
        }
    })
}

/// The stated codimension bound for one condition. `tag` is one of
/// `R0.1-irred`, `R0.1-rank`, `R0.2`, `R1`, `R2.1`, `R2.2`, `R3.1`, `R3.2`.
///
/// # Safety
/// `tag` must be a valid nul-terminated string; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fanoci_condition_bound(
    tag: *const c_char,
    m: u32,
    d1: u32,
    d2: u32,
    out: *mut i64,
) -> FanociStatus {
    guard(|| {
        if out.is_null() {
            return fail(FanociStatus::NullPointer, "null output pointer");
        }
        let name = match read_str(tag) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let Some(tag) = BoundTag::parse(name) else {
            return fail(
                FanociStatus::InputError,
                format!("unknown condition {name:?}"),
            );
        };
        match condition_bound(tag, m as usize, d1, d2)
            .map_err(from_error)
            .and_then(to_i64)
        {
            Ok(v) => {
                *out = v;
                FanociStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Fills `*out` with the bound ledger at `(M, d1, d2)`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fanoci_ledger(
    m: u32,
    d1: u32,
    d2: u32,
    out: *mut FanociLedger,
) -> FanociStatus {
    guard(|| {
        if out.is_null() {
            return fail(FanociStatus::NullPointer, "null output pointer");
        }
        let ledger = match theorem02_minimum(m as usize, d1, d2) {
            Ok(l) => l,
            Err(e) => return from_error(e),
        };
        let conv = || -> Result<FanociLedger, FanociStatus> {
            let [r01_irred, r01_rank, r02, r1, r22, r21, r31] = ledger.values();
            Ok(FanociLedger {
                m,
                d1,
                d2,
                r01_irred: to_i64(r01_irred)?,
                r01_rank: to_i64(r01_rank)?,
                r02: to_i64(r02)?,
                r1: to_i64(r1)?,
                r22: to_i64(r22)?,
                r21: to_i64(r21)?,
                r31: to_i64(r31)?,
                minimum: to_i64(ledger.minimum)?,
                target: to_i64(ledger.target)?,
                ok: ledger.ok(),
            })
        };
        match conv() {
            Ok(l) => {
                *out = l;
                if l.ok {
                    FanociStatus::Ok
                } else {
                    fail(FanociStatus::Fail, "a ledger check fails")
                }
            }
            Err(s) => s,
        }
    })
}
