//! C interface to the `robinson-embed` solver.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free` function. Every fallible call returns an
//! [`RbeStatus`] whose values match the command-line exit codes, plus
//! `RBE_STATUS_NULL_POINTER` and `RBE_STATUS_PANIC`. On failure a message is
//! stored per thread and read with [`rbe_last_error`].
//!
//! Strings returned by the library are NUL-terminated UTF-8 and must be
//! released with [`rbe_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use robinson_embed::cli::matrix_error_code;
use robinson_embed::rational::{parse_rational, to_f64};
use robinson_embed::report::{EmbeddingJson, SolveJson};
use robinson_embed::{
    check_embedding, parse_matrix, solve, EmbedError, Embedding, Method, RobinsonMatrix,
    SolveError, SolveOutcome, ThresholdVector,
};

/// Result code of every fallible call. Values 0 to 4 match the
/// command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbeStatus {
    Ok = 0,
    InvalidMatrix = 1,
    Usage = 2,
    Infeasible = 3,
    Internal = 4,
    NullPointer = 5,
    Panic = 6,
}

/// Decision procedure for [`rbe_solve`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbeMethod {
    Auto = 0,
    Ratio = 1,
    General = 2,
}

impl From<RbeMethod> for Method {
    fn from(m: RbeMethod) -> Self {
        match m {
            RbeMethod::Auto => Method::Auto,
            RbeMethod::Ratio => Method::Ratio,
            RbeMethod::General => Method::General,
        }
    }
}

/// A validated Robinson matrix.
pub struct RbeMatrix {
    inner: RobinsonMatrix,
}

/// The result of a solve: thresholds and embedding, or a certificate.
pub struct RbeOutcome {
    inner: SolveOutcome,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

struct Failure(RbeStatus, String);

/// Runs `body`, recording failures and converting panics.
fn guard(body: impl FnOnce() -> Result<RbeStatus, Failure>) -> RbeStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            RbeStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(RbeStatus::NullPointer, format!("{what} is NULL"))
}

/// # Safety
/// `ptr` must be NULL or a NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure(RbeStatus::Usage, format!("{what} is not valid UTF-8")))
}

fn into_c_string(text: String) -> *mut c_char {
    CString::new(text).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn rbe_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn rbe_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rbe_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a matrix in the text format (`n k` header, then `n` rows).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rbe_matrix_parse(
    text: *const c_char,
    out: *mut *mut RbeMatrix,
) -> RbeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = read_str(text, "text")?;
        let m = parse_matrix(text).map_err(|e| {
            let status = if matrix_error_code(&e) == 1 {
                RbeStatus::InvalidMatrix
            } else {
                RbeStatus::Usage
            };
            Failure(status, e.to_string())
        })?;
        *out = Box::into_raw(Box::new(RbeMatrix { inner: m }));
        Ok(RbeStatus::Ok)
    })
}

/// Builds a matrix from `n * n` row-major levels in `[0, k]`.
///
/// # Safety
/// `levels` must point to `n * n` readable values and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn rbe_matrix_from_levels(
    n: usize,
    k: u32,
    levels: *const i64,
    out: *mut *mut RbeMatrix,
) -> RbeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if levels.is_null() {
            return Err(null("levels"));
        }
        let cells = n
            .checked_mul(n)
            .ok_or_else(|| Failure(RbeStatus::Usage, "n * n overflows".into()))?;
        let flat = std::slice::from_raw_parts(levels, cells);
        let rows: Vec<Vec<i64>> = flat.chunks(n.max(1)).map(<[i64]>::to_vec).collect();
        let m = RobinsonMatrix::from_rows(k, &rows).map_err(|e| {
            let status = if matrix_error_code(&e) == 1 {
                RbeStatus::InvalidMatrix
            } else {
                RbeStatus::Usage
            };
            Failure(status, e.to_string())
        })?;
        *out = Box::into_raw(Box::new(RbeMatrix { inner: m }));
        Ok(RbeStatus::Ok)
    })
}

/// Number of vertices, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn rbe_matrix_n(m: *const RbeMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.n())
}

/// Number of levels, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn rbe_matrix_k(m: *const RbeMatrix) -> u32 {
    m.as_ref().map_or(0, |m| m.inner.k())
}

/// # Safety
/// `m` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rbe_matrix_free(m: *mut RbeMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Solves `m`. Returns `RBE_STATUS_OK` or `RBE_STATUS_INFEASIBLE`, and in
/// both cases stores an outcome handle in `out`.
///
/// # Safety
/// `m` must be a live matrix handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rbe_solve(
    m: *const RbeMatrix,
    method: RbeMethod,
    out: *mut *mut RbeOutcome,
) -> RbeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        let outcome = solve(&m.inner, method.into()).map_err(|e| match e {
            SolveError::Method(e) => Failure(RbeStatus::Usage, e.to_string()),
            other => Failure(RbeStatus::Internal, other.to_string()),
        })?;
        let status = if outcome.is_feasible() {
            RbeStatus::Ok
        } else {
            RbeStatus::Infeasible
        };
        *out = Box::into_raw(Box::new(RbeOutcome { inner: outcome }));
        Ok(status)
    })
}

/// # Safety
/// `o` must be NULL or a live outcome handle.
#[no_mangle]
pub unsafe extern "C" fn rbe_outcome_is_feasible(o: *const RbeOutcome) -> bool {
    o.as_ref().is_some_and(|o| o.inner.is_feasible())
}

/// The outcome as `solve --json` prints it. Free with [`rbe_string_free`].
/// Returns NULL for a NULL handle.
///
/// # Safety
/// `o` must be NULL or a live outcome handle.
#[no_mangle]
pub unsafe extern "C" fn rbe_outcome_to_json(o: *const RbeOutcome) -> *mut c_char {
    clear_error();
    let Some(o) = o.as_ref() else {
        set_error("outcome is NULL".into());
        return ptr::null_mut();
    };
    match serde_json::to_string(&SolveJson::from_outcome(&o.inner)) {
        Ok(text) => into_c_string(text),
        Err(e) => {
            set_error(e.to_string());
            ptr::null_mut()
        }
    }
}

/// Copies `d` (length `k`) and `pi` (length `n`) of a feasible outcome as
/// doubles. Either buffer may be NULL to skip it.
///
/// # Safety
/// Non-NULL buffers must hold at least the given number of doubles.
#[no_mangle]
pub unsafe extern "C" fn rbe_outcome_values(
    o: *const RbeOutcome,
    d: *mut f64,
    d_len: usize,
    pi: *mut f64,
    pi_len: usize,
) -> RbeStatus {
    guard(|| {
        let o = o.as_ref().ok_or_else(|| null("outcome"))?;
        let SolveOutcome::Feasible(s) = &o.inner else {
            return Err(Failure(
                RbeStatus::Infeasible,
                "outcome has no embedding".into(),
            ));
        };
        for (buf, len, values, what) in [
            (d, d_len, s.d.values(), "d"),
            (pi, pi_len, s.pi.values(), "pi"),
        ] {
            if buf.is_null() {
                continue;
            }
            if len < values.len() {
                return Err(Failure(
                    RbeStatus::Usage,
                    format!("{what} buffer holds {len} values, needs {}", values.len()),
                ));
            }
            let out = std::slice::from_raw_parts_mut(buf, values.len());
            for (slot, v) in out.iter_mut().zip(values) {
                *slot = to_f64(v);
            }
        }
        Ok(RbeStatus::Ok)
    })
}

/// # Safety
/// `o` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rbe_outcome_free(o: *mut RbeOutcome) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Checks an embedding given as JSON `{"d": [...], "pi": [...]}` with exact
/// rational strings. Returns `RBE_STATUS_OK` if it verifies and
/// `RBE_STATUS_INFEASIBLE` with the violation in [`rbe_last_error`] if not.
///
/// # Safety
/// `m` must be a live matrix handle and `json` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rbe_verify_json(m: *const RbeMatrix, json: *const c_char) -> RbeStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        let text = read_str(json, "json")?;
        let usage = |e: String| Failure(RbeStatus::Usage, e);
        let doc: EmbeddingJson = serde_json::from_str(text).map_err(|e| usage(e.to_string()))?;
        let (d, pi) = doc.parse().map_err(|e| usage(e.to_string()))?;
        let d = ThresholdVector::new(d).map_err(|e| usage(e.to_string()))?;
        match check_embedding(&m.inner, &d, &Embedding::new(pi)) {
            Ok(()) => Ok(RbeStatus::Ok),
            Err(EmbedError::Verification(v)) => Err(Failure(RbeStatus::Infeasible, v.to_string())),
            Err(e) => Err(usage(e.to_string())),
        }
    })
}

/// Checks positions `pi` (length `n`) against thresholds `d` (length `k`)
/// given as exact rational strings such as `"13/2"` or `"6.5"`.
///
/// # Safety
/// `d` and `pi` must point to `d_len` and `pi_len` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn rbe_verify(
    m: *const RbeMatrix,
    d: *const *const c_char,
    d_len: usize,
    pi: *const *const c_char,
    pi_len: usize,
) -> RbeStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        let parse_all = |ptrs: *const *const c_char, len: usize, what: &str| {
            if ptrs.is_null() {
                return Err(null(what));
            }
            std::slice::from_raw_parts(ptrs, len)
                .iter()
                .map(|&p| {
                    let s = read_str(p, what)?;
                    parse_rational(s).map_err(|e| Failure(RbeStatus::Usage, e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()
        };
        let d = ThresholdVector::new(parse_all(d, d_len, "d")?)
            .map_err(|e| Failure(RbeStatus::Usage, e.to_string()))?;
        let pi = Embedding::new(parse_all(pi, pi_len, "pi")?);
        match check_embedding(&m.inner, &d, &pi) {
            Ok(()) => Ok(RbeStatus::Ok),
            Err(EmbedError::Verification(v)) => Err(Failure(RbeStatus::Infeasible, v.to_string())),
            Err(e) => Err(Failure(RbeStatus::Usage, e.to_string())),
        }
    })
}
