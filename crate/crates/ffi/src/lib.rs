//! C ABI for orbitavg.
//!
//! Every entry point returns an [`OrbitavgStatus`]. On failure the message is
//! kept per thread and read with [`orbitavg_last_error`]. Objects are opaque
//! handles released with their `_free` function; strings returned to the
//! caller are released with [`orbitavg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use orbitavg::averaging::{self, PeriodicFlow};
use orbitavg::symbolalg::{json, parse_poly};
use orbitavg::verify::{assemble, SphereOperatorSpec};
use orbitavg::{corrections, sphere, Error, PolySymbol};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitavgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    DimensionMismatch = 4,
    FrameMismatch = 5,
    Precondition = 6,
    Numerical = 7,
    Io = 8,
    Panic = 9,
}

/// Opaque polynomial symbol.
pub struct OrbitavgPoly(PolySymbol);

/// Opaque list of complex eigenvalues, sorted by real then imaginary part.
pub struct OrbitavgSpectrum(Vec<(f64, f64)>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> OrbitavgStatus {
    match e {
        Error::Parse(_) => OrbitavgStatus::Parse,
        Error::DimensionMismatch { .. } | Error::NotThreeDimensional(_) => OrbitavgStatus::DimensionMismatch,
        Error::FrameMismatch(_) => OrbitavgStatus::FrameMismatch,
        Error::Precondition(_) | Error::NonzeroAverage { .. } | Error::Regime(_) => OrbitavgStatus::Precondition,
        Error::NoConvergence(_) | Error::QrNoConvergence { .. } | Error::Invariant(_) => OrbitavgStatus::Numerical,
        Error::Io(_) => OrbitavgStatus::Io,
    }
}

enum Fail {
    Null,
    Utf8,
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> OrbitavgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OrbitavgStatus::Ok,
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument".into());
            OrbitavgStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("string argument is not valid UTF-8".into());
            OrbitavgStatus::InvalidUtf8
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            OrbitavgStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail::Utf8)
}

unsafe fn poly_arg<'a>(p: *const OrbitavgPoly) -> Result<&'a PolySymbol, Fail> {
    p.as_ref().map(|p| &p.0).ok_or(Fail::Null)
}

unsafe fn lambda_arg(lambda: *const i64, n: usize) -> Result<Vec<i64>, Fail> {
    if lambda.is_null() {
        return Err(Fail::Null);
    }
    Ok(std::slice::from_raw_parts(lambda, n).to_vec())
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    *out = CString::new(s).map_err(|e| Error::Invariant(e.to_string()))?.into_raw();
    Ok(())
}

/// Message of the last failure on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn orbitavg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn orbitavg_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn orbitavg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse an expression such as `"x1^2 + 3/2*k1*x2"` in `n` degrees of freedom
/// (`n = 0` infers it from the variables used).
///
/// # Safety
/// `expr` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbitavg_poly_parse(expr: *const c_char, n: usize, out: *mut *mut OrbitavgPoly) -> OrbitavgStatus {
    guard(|| {
        let s = str_arg(expr)?;
        let p = parse_poly(s, (n > 0).then_some(n), None)?;
        put(out, OrbitavgPoly(p))
    })
}

/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbitavg_poly_from_json(text: *const c_char, out: *mut *mut OrbitavgPoly) -> OrbitavgStatus {
    guard(|| {
        let p = json::from_json(str_arg(text)?)?;
        put(out, OrbitavgPoly(p))
    })
}

/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbitavg_poly_to_json(p: *const OrbitavgPoly, out: *mut *mut c_char) -> OrbitavgStatus {
    guard(|| put_string(out, json::to_json(poly_arg(p)?)))
}

/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbitavg_poly_to_expr(p: *const OrbitavgPoly, out: *mut *mut c_char) -> OrbitavgStatus {
    guard(|| put_string(out, poly_arg(p)?.to_expr()))
}

/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbitavg_poly_equal(a: *const OrbitavgPoly, b: *const OrbitavgPoly, out: *mut bool) -> OrbitavgStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null);
        }
        *out = poly_arg(a)? == poly_arg(b)?;
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn orbitavg_poly_free(p: *mut OrbitavgPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Trajectory average of `f` under the flow with frequencies `lambda[0..n]`.
///
/// # Safety
/// `lambda` must point to `n` integers; `f` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbitavg_average(lambda: *const i64, n: usize, f: *const OrbitavgPoly, out: *mut *mut OrbitavgPoly) -> OrbitavgStatus {
    guard(|| {
        let flow = PeriodicFlow::new(lambda_arg(lambda, n)?)?;
        put(out, OrbitavgPoly(averaging::average(&flow, poly_arg(f)?)?))
    })
}

/// Second averaged correction `⟨s⟩` for `p + iεq + ε²r`.
///
/// # Safety
/// As [`orbitavg_average`].
#[no_mangle]
pub unsafe extern "C" fn orbitavg_second_correction(
    lambda: *const i64,
    n: usize,
    q: *const OrbitavgPoly,
    r: *const OrbitavgPoly,
    out: *mut *mut OrbitavgPoly,
) -> OrbitavgStatus {
    guard(|| {
        let flow = PeriodicFlow::new(lambda_arg(lambda, n)?)?;
        put(out, OrbitavgPoly(corrections::second_correction(&flow, poly_arg(q)?, poly_arg(r)?)?))
    })
}

/// Barrier-top function for `p₂ + p₃ + p₄`.
///
/// # Safety
/// As [`orbitavg_average`].
#[no_mangle]
pub unsafe extern "C" fn orbitavg_barrier_s(
    lambda: *const i64,
    n: usize,
    p3: *const OrbitavgPoly,
    p4: *const OrbitavgPoly,
    out: *mut *mut OrbitavgPoly,
) -> OrbitavgStatus {
    guard(|| {
        let flow = PeriodicFlow::new(lambda_arg(lambda, n)?)?;
        put(out, OrbitavgPoly(corrections::barrier_s(&flow, poly_arg(p3)?, poly_arg(p4)?)?))
    })
}

/// Average of `q` over great circles of the unit sphere.
///
/// # Safety
/// `q` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbitavg_sphere_radon(q: *const OrbitavgPoly, out: *mut *mut OrbitavgPoly) -> OrbitavgStatus {
    guard(|| put(out, OrbitavgPoly(sphere::radon_average(poly_arg(q)?)?)))
}

/// Second correction on the sphere; `sigma` receives the form in `(x, ξ)`,
/// `reduced` the form on the sphere of oriented great circles.
///
/// # Safety
/// `q` must be a live handle; `sigma` and `reduced` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn orbitavg_sphere_second_correction(
    q: *const OrbitavgPoly,
    sigma: *mut *mut OrbitavgPoly,
    reduced: *mut *mut OrbitavgPoly,
) -> OrbitavgStatus {
    guard(|| {
        if sigma.is_null() || reduced.is_null() {
            return Err(Fail::Null);
        }
        let s = sphere::sphere_second_correction(poly_arg(q)?)?;
        put(sigma, OrbitavgPoly(s.sigma_form))?;
        put(reduced, OrbitavgPoly(s.reduced_form))
    })
}

/// Eigenvalues of `−h²Δ + iεq` on spherical harmonics of degree
/// `l_min − pad ..= l_max + pad`.
///
/// # Safety
/// `q` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orbitavg_sphere_spectrum(
    h: f64,
    epsilon: f64,
    q: *const OrbitavgPoly,
    l_min: u32,
    l_max: u32,
    pad: u32,
    out: *mut *mut OrbitavgSpectrum,
) -> OrbitavgStatus {
    guard(|| {
        let spec = SphereOperatorSpec { h, epsilon, q: poly_arg(q)?.clone(), l_min, l_max, pad };
        let eig = assemble(&spec)?.eigenvalues()?;
        put(out, OrbitavgSpectrum(eig.iter().map(|z| (z.re, z.im)).collect()))
    })
}

/// Number of eigenvalues in a spectrum (0 for a null handle).
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn orbitavg_spectrum_len(s: *const OrbitavgSpectrum) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `s` must be a live handle; `re` and `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn orbitavg_spectrum_get(s: *const OrbitavgSpectrum, i: usize, re: *mut f64, im: *mut f64) -> OrbitavgStatus {
    guard(|| {
        let s = s.as_ref().ok_or(Fail::Null)?;
        if re.is_null() || im.is_null() {
            return Err(Fail::Null);
        }
        let &(a, b) = s.0.get(i).ok_or(Error::DimensionMismatch { expected: s.0.len(), found: i })?;
        *re = a;
        *im = b;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn orbitavg_spectrum_free(s: *mut OrbitavgSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}
