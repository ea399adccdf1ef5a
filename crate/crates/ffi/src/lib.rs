//! C ABI over `rvaluation`.
//!
//! Objects cross the boundary as opaque handles created by `rv_*_parse` and
//! released by the matching `rv_*_free`. Every fallible call returns an
//! [`RvStatus`]; on anything other than `RV_STATUS_OK` a message is available
//! from [`rv_last_error`] on the same thread. Interval results are returned as
//! canonical strings such as `[1/2,inf]` that the caller releases with
//! [`rv_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rvaluation::drag::parse_rational;
use rvaluation::lebesgue::{canonical_extension, IntervalTestFn, Lebesgue};
use rvaluation::measure::rval_evaluate;
use rvaluation::spaces::FinitePoset;
use rvaluation::syntax::{parse_measure, parse_monotone_map, parse_piecewise, parse_poset, parse_valuation};
use rvaluation::{Error, IntervalValue};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RvStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A literal did not parse.
    Parse = 3,
    /// Well-formed input that the operation rejects.
    InvalidInput = 4,
    /// Refinement stopped at the depth cap above the tolerance.
    DepthCap = 5,
    /// A panic was caught at the boundary.
    Internal = 6,
}

/// Finite poset handle.
pub struct RvPoset(FinitePoset);

/// Piecewise monotone function on `[0,1]`, held as its canonical extension.
pub struct RvFunction(IntervalTestFn);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> RvStatus {
    match e {
        Error::Parse { .. } => RvStatus::Parse,
        Error::DepthCapExceeded { best: Some(_), .. } => RvStatus::DepthCap,
        _ => RvStatus::InvalidInput,
    }
}

struct Failure(RvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `body` with panics and errors turned into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> RvStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RvStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            RvStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(RvStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(RvStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(RvStatus::NullPointer, format!("{what} is null")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(RvStatus::NullPointer, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_interval(out: *mut *mut c_char, v: &IntervalValue) -> Result<(), Failure> {
    let s = CString::new(v.to_string()).expect("interval text has no NUL");
    write_out(out, s.into_raw(), "out")
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn rv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a poset literal such as `poset { a <= b; c }`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rv_poset_parse(src: *const c_char, out: *mut *mut RvPoset) -> RvStatus {
    guard(|| {
        let space = parse_poset(text(src, "src")?)?;
        write_out(out, Box::into_raw(Box::new(RvPoset(space))), "out")
    })
}

/// Number of points, or 0 for null.
///
/// # Safety
/// `poset` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rv_poset_len(poset: *const RvPoset) -> usize {
    poset.as_ref().map_or(0, |p| p.0.len())
}

/// # Safety
/// `poset` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn rv_poset_free(poset: *mut RvPoset) {
    if !poset.is_null() {
        drop(Box::from_raw(poset));
    }
}

/// Evaluates an elementary valuation at an interval-valued test function,
/// both given as literals over `poset`.
///
/// # Safety
/// String arguments must be NUL-terminated, `poset` live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rv_valuation_evaluate(
    poset: *const RvPoset,
    valuation: *const c_char,
    function: *const c_char,
    out: *mut *mut c_char,
) -> RvStatus {
    guard(|| {
        let space = &handle(poset, "poset")?.0;
        let nu = parse_valuation::<IntervalValue>(text(valuation, "valuation")?, space)?;
        let h = parse_monotone_map::<IntervalValue>(text(function, "function")?, space)?;
        write_interval(out, &nu.evaluate(&h)?)
    })
}

/// Evaluates the interval valuation induced by a finite-support measure.
///
/// # Safety
/// As for [`rv_valuation_evaluate`].
#[no_mangle]
pub unsafe extern "C" fn rv_measure_evaluate(
    poset: *const RvPoset,
    measure: *const c_char,
    function: *const c_char,
    out: *mut *mut c_char,
) -> RvStatus {
    guard(|| {
        let space = &handle(poset, "poset")?.0;
        let mu = parse_measure(text(measure, "measure")?, space)?;
        let h = parse_monotone_map::<IntervalValue>(text(function, "function")?, space)?;
        write_interval(out, &rval_evaluate(&mu, &h)?)
    })
}

/// Parses a piecewise monotone function on `[0,1]`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rv_function_parse(src: *const c_char, out: *mut *mut RvFunction) -> RvStatus {
    guard(|| {
        let f = parse_piecewise(text(src, "src")?)?;
        let h = canonical_extension(&f)?;
        write_out(out, Box::into_raw(Box::new(RvFunction(h))), "out")
    })
}

/// # Safety
/// `function` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn rv_function_free(function: *mut RvFunction) {
    if !function.is_null() {
        drop(Box::from_raw(function));
    }
}

/// The depth-`n` enclosure of the integral of `function`.
///
/// # Safety
/// `function` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rv_lebesgue_n(function: *const RvFunction, n: u32, out: *mut *mut c_char) -> RvStatus {
    guard(|| {
        let h = &handle(function, "function")?.0;
        let engine = Lebesgue::new().with_depth_cap(n)?;
        write_interval(out, &engine.lebesgue_n(n, h)?)
    })
}

/// Refines until the enclosure is at most `eps` wide (`eps` is a rational
/// literal such as `1/4096`). `threads` of 0 runs on the calling thread.
///
/// On `RV_STATUS_DEPTH_CAP` the deepest enclosure reached is still
/// written to `out` and `depth`.
///
/// # Safety
/// `function` must be live, `eps` NUL-terminated, `out` and `depth` writable.
#[no_mangle]
pub unsafe extern "C" fn rv_integrate(
    function: *const RvFunction,
    eps: *const c_char,
    depth_cap: u32,
    threads: u32,
    out: *mut *mut c_char,
    depth: *mut u32,
) -> RvStatus {
    guard(|| {
        let h = &handle(function, "function")?.0;
        let eps = parse_rational(text(eps, "eps")?)?;
        if out.is_null() || depth.is_null() {
            return Err(Failure(RvStatus::NullPointer, "out is null".into()));
        }
        let mut engine = Lebesgue::new().with_depth_cap(depth_cap)?;
        if threads > 0 {
            engine = engine.with_threads(threads as usize)?;
        }
        match engine.integrate(h, &eps) {
            Ok((v, n)) => {
                write_interval(out, &v)?;
                write_out(depth, n, "depth")
            }
            Err(e) => {
                if let Error::DepthCapExceeded { best: Some((v, n)), .. } = &e {
                    write_interval(out, v)?;
                    write_out(depth, *n, "depth")?;
                }
                Err(e.into())
            }
        }
    })
}
