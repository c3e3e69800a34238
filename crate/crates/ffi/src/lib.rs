//! C ABI over the qorbifold engine.
//!
//! Every fallible function returns a [`QoStatus`]; on failure the message is
//! available from [`qo_last_error_message`] on the same thread. Handles are
//! opaque and must be released with their `_free` function. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`qo_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use qorbifold::expansion::ArcExpansion;
use qorbifold::scenario::Scenario;
use qorbifold::snake::count_matchings;
use qorbifold::verify::{verify, SeedCheckMode};
use qorbifold::Error;

/// Result codes shared by all functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    Validation = 5,
    Integrity = 6,
    NotFound = 7,
    CheckFailed = 8,
    BufferTooSmall = 9,
    Internal = 10,
}

/// A parsed and validated scenario.
pub struct QoScenario {
    inner: Scenario,
}

/// Quantum expansion of one curve: terms in increasing lexicographic order of
/// exponent vectors, coefficients as (q^{1/2}-power, integer) pairs.
pub struct QoExpansion {
    rank: usize,
    terms: Vec<Term>,
}

type Term = (Vec<i64>, Vec<(i64, i64)>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let clean = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = clean);
}

struct Failure(QoStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Scenario { .. } => QoStatus::Parse,
            Error::Io(_) => QoStatus::Io,
            Error::Integrity(_) => QoStatus::Integrity,
            Error::NotFound(_) => QoStatus::NotFound,
            _ => QoStatus::Validation,
        };
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            QoStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QoStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(QoStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(QoStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn scenario<'a>(s: *const QoScenario) -> Result<&'a Scenario, Failure> {
    s.as_ref().map(|h| &h.inner).ok_or_else(|| null("scenario"))
}

fn owned_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(QoStatus::Internal, "output contains a NUL byte".into()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn qo_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Loads a scenario document from a file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qo_scenario_load(path: *const c_char, out: *mut *mut QoScenario) -> QoStatus {
    guard(|| {
        let path = text(path, "path")?;
        let inner = Scenario::load(Path::new(path))?;
        put(out, Box::into_raw(Box::new(QoScenario { inner })))
    })
}

/// Parses a scenario document held in memory.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qo_scenario_from_json(json: *const c_char, out: *mut *mut QoScenario) -> QoStatus {
    guard(|| {
        let inner = Scenario::parse(text(json, "json")?)?;
        put(out, Box::into_raw(Box::new(QoScenario { inner })))
    })
}

/// Releases a scenario; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qo_scenario_free(s: *mut QoScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Canonical document text of a scenario.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qo_scenario_to_json(s: *const QoScenario, out: *mut *mut c_char) -> QoStatus {
    guard(|| {
        let text = scenario(s)?.serialize();
        put(out, owned_string(text)?)
    })
}

/// Number of cluster variables `m` and mutable directions `n` of the seed.
///
/// # Safety
/// `s` must be a live handle; `m` and `n` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qo_scenario_rank(s: *const QoScenario, m: *mut usize, n: *mut usize) -> QoStatus {
    guard(|| {
        let seed = &scenario(s)?.seed;
        put(m, seed.m())?;
        put(n, seed.n())
    })
}

unsafe fn expansion_of<'a>(s: *const QoScenario, arc: *const c_char) -> Result<(&'a Scenario, ArcExpansion), Failure> {
    let s: &'a Scenario = scenario(s)?;
    let c = s.target(text(arc, "arc")?)?;
    let e = ArcExpansion::compute(&s.triangulation, &c, s.seed.btilde())?;
    Ok((s, e))
}

/// Expansion of a curve (or arc of the triangulation) in canonical text,
/// quantum or at q = 1.
///
/// # Safety
/// `s` must be a live handle, `arc` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qo_expand_text(
    s: *const QoScenario,
    arc: *const c_char,
    commutative: bool,
    out: *mut *mut c_char,
) -> QoStatus {
    guard(|| {
        let (s, e) = expansion_of(s, arc)?;
        let text = if commutative {
            e.commutative()
                .iter()
                .map(|(a, c)| format!("{c} {}\n", qorbifold::torus::format_exponent(a)))
                .collect()
        } else {
            e.quantum(&s.seed)?.to_string()
        };
        put(out, owned_string(text)?)
    })
}

/// Number of perfect matchings of the curve's snake graph.
///
/// # Safety
/// `s` must be a live handle, `arc` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qo_matching_count(s: *const QoScenario, arc: *const c_char, out: *mut u64) -> QoStatus {
    guard(|| {
        let s = scenario(s)?;
        let c = s.target(text(arc, "arc")?)?;
        let g = qorbifold::snake::build_snake_graph(&s.triangulation, &c)?;
        let n = u64::try_from(count_matchings(&g))
            .map_err(|_| Failure(QoStatus::Internal, "matching count exceeds 64 bits".into()))?;
        put(out, n)
    })
}

/// Runs the verification suite, or one named check when `check` is non-null.
/// Returns `CheckFailed` if any check fails. The report (one line per check)
/// is stored in `report` when it is non-null.
///
/// # Safety
/// `s` must be a live handle; `check` null or NUL-terminated; `report` null
/// or valid.
#[no_mangle]
pub unsafe extern "C" fn qo_verify(s: *const QoScenario, check: *const c_char, report: *mut *mut c_char) -> QoStatus {
    guard(|| {
        let s = scenario(s)?;
        let only = if check.is_null() { None } else { Some(text(check, "check")?) };
        let mode = SeedCheckMode::from_env()?;
        let r = verify(s, only, mode)?;
        if !report.is_null() {
            put(report, owned_string(r.to_string())?)?;
        }
        if r.passed() {
            Ok(())
        } else {
            let first = r.failures().next().map(ToString::to_string).unwrap_or_default();
            Err(Failure(QoStatus::CheckFailed, first))
        }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qo_string_free(p: *mut c_char) {
    if !p.is_null() {
        drop(CString::from_raw(p));
    }
}

/// Computes the quantum expansion of a curve as a term table.
///
/// # Safety
/// `s` must be a live handle, `arc` a NUL-terminated string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qo_expansion_new(
    s: *const QoScenario,
    arc: *const c_char,
    out: *mut *mut QoExpansion,
) -> QoStatus {
    guard(|| {
        let (s, e) = expansion_of(s, arc)?;
        let x = e.quantum(&s.seed)?;
        let terms = x
            .terms()
            .map(|(a, c)| (a.clone(), c.terms().rev().collect()))
            .collect();
        put(
            out,
            Box::into_raw(Box::new(QoExpansion {
                rank: s.seed.m(),
                terms,
            })),
        )
    })
}

/// Releases an expansion; null is ignored.
///
/// # Safety
/// `e` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qo_expansion_free(e: *mut QoExpansion) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

unsafe fn expansion<'a>(e: *const QoExpansion) -> Result<&'a QoExpansion, Failure> {
    e.as_ref().ok_or_else(|| null("expansion"))
}

fn term(e: &QoExpansion, i: usize) -> Result<&Term, Failure> {
    e.terms.get(i).ok_or_else(|| {
        Failure(
            QoStatus::NotFound,
            format!("term {i} out of range (expansion has {})", e.terms.len()),
        )
    })
}

/// Number of terms and length of every exponent vector.
///
/// # Safety
/// `e` must be a live handle; `terms` and `rank` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qo_expansion_shape(e: *const QoExpansion, terms: *mut usize, rank: *mut usize) -> QoStatus {
    guard(|| {
        let e = expansion(e)?;
        put(terms, e.terms.len())?;
        put(rank, e.rank)
    })
}

/// Copies the exponent vector of term `i` into `buf` (`len` >= rank).
///
/// # Safety
/// `e` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qo_expansion_exponent(e: *const QoExpansion, i: usize, buf: *mut i64, len: usize) -> QoStatus {
    guard(|| {
        let e = expansion(e)?;
        let (a, _) = term(e, i)?;
        if buf.is_null() {
            return Err(null("buffer"));
        }
        if len < a.len() {
            return Err(Failure(QoStatus::BufferTooSmall, format!("need {} entries", a.len())));
        }
        ptr::copy_nonoverlapping(a.as_ptr(), buf, a.len());
        Ok(())
    })
}

/// Number of q^{1/2}-powers in the coefficient of term `i`.
///
/// # Safety
/// `e` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qo_expansion_coefficient_len(e: *const QoExpansion, i: usize, out: *mut usize) -> QoStatus {
    guard(|| {
        let e = expansion(e)?;
        put(out, term(e, i)?.1.len())
    })
}

/// Copies the coefficient of term `i`, highest power first: `powers[k]` is
/// an exponent of q^{1/2} and `coefficients[k]` its integer coefficient.
///
/// # Safety
/// `e` must be a live handle; both buffers valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qo_expansion_coefficient(
    e: *const QoExpansion,
    i: usize,
    powers: *mut i64,
    coefficients: *mut i64,
    len: usize,
) -> QoStatus {
    guard(|| {
        let e = expansion(e)?;
        let (_, c) = term(e, i)?;
        if powers.is_null() || coefficients.is_null() {
            return Err(null("buffer"));
        }
        if len < c.len() {
            return Err(Failure(QoStatus::BufferTooSmall, format!("need {} entries", c.len())));
        }
        for (k, &(p, v)) in c.iter().enumerate() {
            powers.add(k).write(p);
            coefficients.add(k).write(v);
        }
        Ok(())
    })
}
