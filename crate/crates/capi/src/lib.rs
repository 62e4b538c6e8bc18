//! C ABI for the model counter, for binding from other languages.
//!
//! Conventions: every fallible function returns a [`CcStatus`] and writes its
//! result through an out-pointer. On failure a thread-local message is set
//! and can be fetched with [`cc_last_error_message`]. Counts are returned as
//! decimal strings since they exceed any fixed-width integer. Strings handed
//! out by this library must be released with [`cc_string_free`], formulas
//! with [`cc_formula_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use clausecount::analysis::run_report;
use clausecount::dimacs::{parse_dimacs, serialize_dimacs};
use clausecount::gen::{generate, GenParams};
use clausecount::mc2::count_mc2_with;
use clausecount::mc3::count_mc3_with;
use clausecount::propagate::oracle_count;
use clausecount::{Algorithm, CountOptions, Formula};

/// Result of a call across the C boundary.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CcStatus {
    CcOk = 0,
    CcNullPointer = 1,
    CcInvalidUtf8 = 2,
    CcParseError = 3,
    CcWidthError = 4,
    CcCapExceeded = 5,
    CcInvalidArgument = 6,
    CcInternalError = 7,
}

/// Counting algorithm selector.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CcAlgorithm {
    /// Branching counter for width-2 formulas.
    CcMc2 = 0,
    /// Branching counter for width-3 formulas.
    CcMc3 = 1,
    /// Exhaustive enumeration; capped at 25 occurring variables.
    CcOracle = 2,
    /// Width-2 counter when every clause has width at most two, else width-3.
    CcAuto = 3,
}

/// Optional knobs; pass NULL for defaults. The count never depends on them.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CcOptions {
    /// Disable the five-vertex product rule.
    pub five_vertex_disabled: bool,
    /// Evaluate polarity branches concurrently.
    pub parallel: bool,
}

/// Opaque handle to a parsed formula.
pub struct CcFormula {
    inner: Formula,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error message unavailable").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn fail(status: CcStatus, message: String) -> CcStatus {
    set_last_error(message);
    status
}

fn guarded(body: impl FnOnce() -> CcStatus) -> CcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(CcStatus::CcInternalError, "internal assertion failed".to_string()),
    }
}

/// Borrows a formula handle, or fails with `CC_NULL_POINTER`.
unsafe fn borrow_formula<'a>(formula: *const CcFormula) -> Result<&'a Formula, CcStatus> {
    match formula.as_ref() {
        Some(handle) => Ok(&handle.inner),
        None => Err(fail(CcStatus::CcNullPointer, "formula handle is NULL".to_string())),
    }
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> CcStatus {
    if out.is_null() {
        return fail(CcStatus::CcNullPointer, "output pointer is NULL".to_string());
    }
    let text = CString::new(text.replace('\0', " ")).expect("interior NULs replaced");
    *out = text.into_raw();
    CcStatus::CcOk
}

fn resolve(algorithm: CcAlgorithm, f: &Formula) -> Result<Option<Algorithm>, CcStatus> {
    let width = f.max_clause_len();
    match algorithm {
        CcAlgorithm::CcOracle => Ok(None),
        CcAlgorithm::CcMc2 => Ok(Some(Algorithm::Mc2)),
        CcAlgorithm::CcMc3 => Ok(Some(Algorithm::Mc3)),
        CcAlgorithm::CcAuto if width <= 2 => Ok(Some(Algorithm::Mc2)),
        CcAlgorithm::CcAuto if width <= 3 => Ok(Some(Algorithm::Mc3)),
        CcAlgorithm::CcAuto => Err(fail(
            CcStatus::CcWidthError,
            format!("clauses of length {width} are unsupported"),
        )),
    }
}

fn options_from(options: *const CcOptions) -> CountOptions {
    let given = unsafe { options.as_ref() }.copied().unwrap_or_default();
    CountOptions {
        five_vertex: !given.five_vertex_disabled,
        parallel: given.parallel,
        trace: false,
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn cc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Most recent error message on this thread, or NULL. Free the returned
/// string with `cc_string_free`.
#[no_mangle]
pub extern "C" fn cc_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null_mut(), |msg| msg.clone().into_raw())
    })
}

/// Parses DIMACS CNF text into a formula handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out_formula` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_formula_parse(
    text: *const c_char,
    out_formula: *mut *mut CcFormula,
) -> CcStatus {
    guarded(|| {
        if text.is_null() || out_formula.is_null() {
            return fail(CcStatus::CcNullPointer, "argument is NULL".to_string());
        }
        let text = match CStr::from_ptr(text).to_str() {
            Ok(text) => text,
            Err(_) => return fail(CcStatus::CcInvalidUtf8, "input is not UTF-8".to_string()),
        };
        match parse_dimacs(text) {
            Ok(parsed) => {
                *out_formula = Box::into_raw(Box::new(CcFormula { inner: parsed.formula }));
                CcStatus::CcOk
            }
            Err(e) => fail(CcStatus::CcParseError, e.to_string()),
        }
    })
}

/// Releases a formula handle; NULL is ignored.
///
/// # Safety
/// `formula` must be NULL or a pointer returned by `cc_formula_parse`.
#[no_mangle]
pub unsafe extern "C" fn cc_formula_free(formula: *mut CcFormula) {
    if !formula.is_null() {
        drop(Box::from_raw(formula));
    }
}

/// Declared variable count; zero for a NULL handle.
///
/// # Safety
/// `formula` must be NULL or a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn cc_formula_num_vars(formula: *const CcFormula) -> u32 {
    formula.as_ref().map_or(0, |f| f.inner.num_declared_vars())
}

/// Clause count; zero for a NULL handle.
///
/// # Safety
/// `formula` must be NULL or a live formula handle.
#[no_mangle]
pub unsafe extern "C" fn cc_formula_num_clauses(formula: *const CcFormula) -> u64 {
    formula.as_ref().map_or(0, |f| f.inner.clause_count() as u64)
}

/// Serializes a formula back to canonical DIMACS.
///
/// # Safety
/// `formula` must be a live handle; `out_text` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_formula_to_dimacs(
    formula: *const CcFormula,
    out_text: *mut *mut c_char,
) -> CcStatus {
    guarded(|| {
        let f = match borrow_formula(formula) {
            Ok(f) => f,
            Err(status) => return status,
        };
        write_string(out_text, serialize_dimacs(f))
    })
}

/// Counts the models of a formula over its declared universe, writing the
/// count as a decimal string.
///
/// # Safety
/// `formula` must be a live handle; `options` must be NULL or valid;
/// `out_count` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_count(
    formula: *const CcFormula,
    algorithm: CcAlgorithm,
    options: *const CcOptions,
    out_count: *mut *mut c_char,
) -> CcStatus {
    guarded(|| {
        let f = match borrow_formula(formula) {
            Ok(f) => f,
            Err(status) => return status,
        };
        let resolved = match resolve(algorithm, f) {
            Ok(resolved) => resolved,
            Err(status) => return status,
        };
        let opts = options_from(options);
        let count = match resolved {
            None => match oracle_count(f) {
                Ok(count) => count,
                Err(e) => return fail(CcStatus::CcCapExceeded, e.to_string()),
            },
            Some(Algorithm::Mc2) => match count_mc2_with(f, &opts, None) {
                Ok(count) => count,
                Err(e) => return fail(CcStatus::CcWidthError, e.to_string()),
            },
            Some(Algorithm::Mc3) => match count_mc3_with(f, &opts, None) {
                Ok(count) => count,
                Err(e) => return fail(CcStatus::CcWidthError, e.to_string()),
            },
        };
        write_string(out_count, count.to_string())
    })
}

/// Counts under instrumentation and writes the run statistics as a JSON
/// object. The oracle carries no branching statistics and is rejected.
///
/// # Safety
/// Same contract as `cc_count`.
#[no_mangle]
pub unsafe extern "C" fn cc_stats_json(
    formula: *const CcFormula,
    algorithm: CcAlgorithm,
    options: *const CcOptions,
    out_json: *mut *mut c_char,
) -> CcStatus {
    guarded(|| {
        let f = match borrow_formula(formula) {
            Ok(f) => f,
            Err(status) => return status,
        };
        let resolved = match resolve(algorithm, f) {
            Ok(Some(resolved)) => resolved,
            Ok(None) => {
                return fail(
                    CcStatus::CcInvalidArgument,
                    "statistics require a branching algorithm".to_string(),
                )
            }
            Err(status) => return status,
        };
        match run_report(f, resolved, &options_from(options)) {
            Ok(report) => {
                let json = serde_json::to_string(&report).expect("reports serialize");
                write_string(out_json, json)
            }
            Err(e) => fail(CcStatus::CcWidthError, e.to_string()),
        }
    })
}

/// Generates a seeded random k-CNF instance and writes it as DIMACS text.
///
/// # Safety
/// `out_text` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cc_generate_dimacs(
    k: u8,
    n: u32,
    m: u64,
    seed: u64,
    out_text: *mut *mut c_char,
) -> CcStatus {
    guarded(|| {
        let m = match usize::try_from(m) {
            Ok(m) => m,
            Err(_) => return fail(CcStatus::CcInvalidArgument, "clause count overflows".to_string()),
        };
        match generate(&GenParams { k, n, m, seed }) {
            Ok(f) => write_string(out_text, serialize_dimacs(&f)),
            Err(e) => fail(CcStatus::CcInvalidArgument, e.to_string()),
        }
    })
}

/// Releases a string returned by this library; NULL is ignored.
///
/// # Safety
/// `text` must be NULL or a pointer returned by this library.
#[no_mangle]
pub unsafe extern "C" fn cc_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}
