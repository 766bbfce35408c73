//! C interface to `trl-core`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` and
//! released by the matching `*_free`. Every fallible call returns a
//! [`TrlStatus`]; on failure the message is kept per thread and read with
//! [`trl_last_error`]. Array outputs follow one convention: the caller passes
//! a buffer and its capacity, the callee always stores the required length,
//! and reports `TRL_STATUS_BUFFER_TOO_SMALL` without writing when it does not
//! fit. Passing a null buffer with capacity 0 is the way to query the size.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use trl_core::experiments::{self, Table1Config, VerifyConfig};
use trl_core::{classify, poly, roots, trinomial, ComplexPoly, Error, RecurrenceSpec, SolverOptions, TrinomialSpec, C64};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrlComplex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for TrlComplex {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<TrlComplex> for C64 {
    fn from(z: TrlComplex) -> Self {
        C64::new(z.re, z.im)
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BufferTooSmall = 3,
    /// The numerical routine failed or the input sits on an excluded point.
    Numerical = 4,
    Io = 5,
    Panic = 6,
}

/// Recurrence `P_n + B P_{n-l} + A P_{n-k} = 0`.
pub struct TrlRecurrence(RecurrenceSpec);

/// Trinomial `a t^k + b t^l + 1`.
pub struct TrlTrinomial(TrinomialSpec);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> TrlStatus {
    match err {
        Error::InvalidSpec(_) | Error::PolyLiteral(_) | Error::AlphaNotReal { .. } => TrlStatus::InvalidArgument,
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => TrlStatus::Io,
        _ => TrlStatus::Numerical,
    }
}

struct Fail(TrlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(TrlStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure and turns panics into `Panic`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TrlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TrlStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            TrlStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn poly_from(data: *const TrlComplex, len: usize, what: &str) -> Result<ComplexPoly, Fail> {
    let c = slice(data, len, what)?;
    Ok(ComplexPoly::new(c.iter().map(|&z| z.into()).collect()))
}

unsafe fn write_array(values: &[C64], out: *mut TrlComplex, cap: usize, len_out: *mut usize) -> Result<(), Fail> {
    if len_out.is_null() {
        return Err(null("length output"));
    }
    *len_out = values.len();
    if values.len() > cap {
        return Err(Fail(
            TrlStatus::BufferTooSmall,
            format!("need {} entries, capacity {cap}", values.len()),
        ));
    }
    if !values.is_empty() {
        if out.is_null() {
            return Err(null("output buffer"));
        }
        for (i, &v) in values.iter().enumerate() {
            *out.add(i) = v.into();
        }
    }
    Ok(())
}

unsafe fn store<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output"));
    }
    *out = value;
    Ok(())
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, Fail> {
    h.as_ref().ok_or_else(|| null("handle"))
}

fn json_out(out: *mut *mut c_char, text: String) -> Result<(), Fail> {
    let s = CString::new(text).map_err(|e| Fail(TrlStatus::Io, e.to_string()))?;
    unsafe { store(out, s.into_raw()) }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn trl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn trl_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => panic!("version"),
    };
    VERSION.as_ptr()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from a `trl_*_json` call and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn trl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a recurrence from ascending coefficient arrays of `A` and `B`.
///
/// # Safety
/// `a` and `b` must point to `a_len` and `b_len` readable values; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn trl_recurrence_new(
    a: *const TrlComplex,
    a_len: usize,
    b: *const TrlComplex,
    b_len: usize,
    k: u32,
    l: u32,
    out: *mut *mut TrlRecurrence,
) -> TrlStatus {
    guard(|| {
        let spec = RecurrenceSpec::new(poly_from(a, a_len, "A")?, poly_from(b, b_len, "B")?, k, l)?;
        store(out, Box::into_raw(Box::new(TrlRecurrence(spec))))
    })
}

/// The recurrence behind the reference table.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trl_recurrence_table1(out: *mut *mut TrlRecurrence) -> TrlStatus {
    guard(|| store(out, Box::into_raw(Box::new(TrlRecurrence(RecurrenceSpec::table1())))))
}

/// # Safety
/// `rec` must come from `trl_recurrence_new` or `trl_recurrence_table1`, or be null.
#[no_mangle]
pub unsafe extern "C" fn trl_recurrence_free(rec: *mut TrlRecurrence) {
    if !rec.is_null() {
        drop(Box::from_raw(rec));
    }
}

/// Ascending coefficients of `P_n`. The zero polynomial has length 0.
///
/// # Safety
/// `rec` must be a live handle, `coeffs` must hold `cap` values, `len_out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn trl_recurrence_term(
    rec: *const TrlRecurrence,
    n: usize,
    coeffs: *mut TrlComplex,
    cap: usize,
    len_out: *mut usize,
) -> TrlStatus {
    guard(|| {
        let spec = &handle(rec)?.0;
        let seq = poly::generate_sequence(spec, n);
        let p = &seq[n];
        let c: &[C64] = if p.is_zero() { &[] } else { p.coeffs() };
        write_array(c, coeffs, cap, len_out)
    })
}

/// Full verification of `P_n` for each listed `n`, as a JSON report. The
/// status is `Ok` whether or not the checks pass; read `passed` in the report.
///
/// # Safety
/// `rec` must be a live handle, `ns` must hold `ns_len` values, `out` must be
/// writable. Free the string with `trl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn trl_recurrence_verify_json(
    rec: *const TrlRecurrence,
    ns: *const usize,
    ns_len: usize,
    out: *mut *mut c_char,
) -> TrlStatus {
    guard(|| {
        let spec = &handle(rec)?.0;
        let ns = slice(ns, ns_len, "ns")?;
        let report = experiments::run_full_verification(spec, ns, &VerifyConfig::default());
        json_out(out, report.to_json()?)
    })
}

/// Zeros of a polynomial given by ascending coefficients.
///
/// # Safety
/// `coeffs` must hold `len` values, `roots_out` `cap` values; `count_out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn trl_poly_roots(
    coeffs: *const TrlComplex,
    len: usize,
    roots_out: *mut TrlComplex,
    cap: usize,
    count_out: *mut usize,
) -> TrlStatus {
    guard(|| {
        let p = poly_from(coeffs, len, "coefficients")?;
        let rs = roots::find_roots(&p, &SolverOptions::default())?;
        write_array(&rs.roots, roots_out, cap, count_out)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trl_trinomial_new(
    a: TrlComplex,
    b: TrlComplex,
    k: u32,
    l: u32,
    out: *mut *mut TrlTrinomial,
) -> TrlStatus {
    guard(|| {
        let tri = TrinomialSpec::new(a.into(), b.into(), k, l)?;
        store(out, Box::into_raw(Box::new(TrlTrinomial(tri))))
    })
}

/// The trinomial `A(z0) t^k + B(z0) t^l + 1`; fails when `z0` is a zero of `A`.
///
/// # Safety
/// `rec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn trl_trinomial_at(
    rec: *const TrlRecurrence,
    z0: TrlComplex,
    out: *mut *mut TrlTrinomial,
) -> TrlStatus {
    guard(|| {
        let tri = trinomial::specialize(&handle(rec)?.0, z0.into())?;
        store(out, Box::into_raw(Box::new(TrlTrinomial(tri))))
    })
}

/// # Safety
/// `tri` must come from `trl_trinomial_new` or `trl_trinomial_at`, or be null.
#[no_mangle]
pub unsafe extern "C" fn trl_trinomial_free(tri: *mut TrlTrinomial) {
    if !tri.is_null() {
        drop(Box::from_raw(tri));
    }
}

/// `alpha = (-1)^k b^k / a^l` and whether it counts as real.
///
/// # Safety
/// `tri` must be a live handle; `alpha` and `is_real` writable.
#[no_mangle]
pub unsafe extern "C" fn trl_trinomial_alpha(
    tri: *const TrlTrinomial,
    alpha: *mut TrlComplex,
    is_real: *mut bool,
) -> TrlStatus {
    guard(|| {
        let v = handle(tri)?.0.alpha();
        store(alpha, v.alpha.into())?;
        store(is_real, v.is_real)
    })
}

/// The `k` zeros, with multiplicity.
///
/// # Safety
/// `tri` must be a live handle, `roots_out` must hold `cap` values,
/// `count_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trl_trinomial_roots(
    tri: *const TrlTrinomial,
    roots_out: *mut TrlComplex,
    cap: usize,
    count_out: *mut usize,
) -> TrlStatus {
    guard(|| {
        let rs = trinomial::roots(&handle(tri)?.0, &SolverOptions::default())?;
        write_array(&rs.roots, roots_out, cap, count_out)
    })
}

/// Number of distinct real values among the ratios of distinct zeros.
///
/// # Safety
/// `tri` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn trl_trinomial_real_ratio_count(
    tri: *const TrlTrinomial,
    tol: f64,
    out: *mut usize,
) -> TrlStatus {
    guard(|| {
        let rs = trinomial::roots(&handle(tri)?.0, &SolverOptions::default())?;
        store(out, classify::count_real_ratios(&rs, tol)?)
    })
}

/// Expected number of distinct real ratios; requires a real `alpha`.
///
/// # Safety
/// `tri` must be a live handle; `count` and `boundary` writable.
#[no_mangle]
pub unsafe extern "C" fn trl_trinomial_omega(
    tri: *const TrlTrinomial,
    count: *mut u32,
    boundary: *mut bool,
) -> TrlStatus {
    guard(|| {
        let t = &handle(tri)?.0;
        let o = trinomial::omega_expected(t.alpha().alpha, t.k, t.l)?;
        store(count, o.count)?;
        store(boundary, o.boundary)
    })
}

/// The q-discriminant at `q`; vanishes when `q` is a ratio of two zeros.
///
/// # Safety
/// `tri` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn trl_trinomial_q_discriminant(
    tri: *const TrlTrinomial,
    q: TrlComplex,
    out: *mut TrlComplex,
) -> TrlStatus {
    guard(|| {
        let v = trinomial::q_discriminant(&handle(tri)?.0, q.into())?;
        store(out, v.into())
    })
}

/// `h(q) = (1 - q^k)^k / ((1 - q^l)^l (q^l - q^k)^(k-l))`
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trl_h(q: TrlComplex, k: u32, l: u32, out: *mut TrlComplex) -> TrlStatus {
    guard(|| {
        poly::check_shifts(k, l)?;
        store(out, trinomial::h_eval(q.into(), k, l)?.into())
    })
}

/// Real restriction of `h`, continuous at 1.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trl_g(x: f64, k: u32, l: u32, out: *mut f64) -> TrlStatus {
    guard(|| {
        poly::check_shifts(k, l)?;
        store(out, trinomial::g_eval(x, k, l)?)
    })
}

/// `k^k / (l^l (k-l)^(k-l))`
#[no_mangle]
pub extern "C" fn trl_beta(k: u32, l: u32) -> f64 {
    if poly::check_shifts(k, l).is_err() {
        return f64::NAN;
    }
    trinomial::beta(k, l)
}

/// Reproduces the reference table as a JSON report. `tol` is the cell
/// tolerance; pass a non-positive value for the default.
///
/// # Safety
/// `out` must be writable. Free the string with `trl_string_free`.
#[no_mangle]
pub unsafe extern "C" fn trl_table1_json(tol: f64, out: *mut *mut c_char) -> TrlStatus {
    guard(|| {
        let mut cfg = Table1Config::default();
        if tol > 0.0 {
            cfg.tol = tol;
        }
        json_out(out, experiments::run_table1(&cfg)?.to_json()?)
    })
}
