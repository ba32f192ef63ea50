//! C ABI for `harmonic-na`.
//!
//! Algebras are opaque handles created by [`hna_algebra_new`] and released by
//! [`hna_algebra_free`]. Every fallible call returns an [`HnaStatus`]; the
//! message of the last failure on the calling thread is available through
//! [`hna_last_error_message`]. Points are flat arrays `[X…, Z…, t]` of length
//! `n = m + k + 1`, with `t = log a`.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use harmonic_na::htype::{build_htype, HTypeAlgebra};
use harmonic_na::meanvalue::bessel_half_integer;
use harmonic_na::nagroup::{cayley, distance, NAPoint};
use harmonic_na::poisson::poisson_kernel;
use harmonic_na::slowdecrease::{check_slow_decrease, spherical_phi_target, SlowDecreaseWitness};
use harmonic_na::spherical::{plancherel_density, spherical_phi, JacobiParams};
use harmonic_na::Error;
use num_complex::Complex64;

/// Opaque H-type algebra.
pub struct HnaAlgebra(HTypeAlgebra);

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HnaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Domain = 4,
    NonConvergence = 5,
    Quadrature = 6,
    UnsupportedDimension = 7,
    BufferTooSmall = 8,
    Panic = 9,
    Other = 10,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> HnaStatus {
    match e {
        Error::UnsupportedDimension(_) => HnaStatus::UnsupportedDimension,
        Error::InvalidArgument(_) | Error::Config(_) => HnaStatus::InvalidArgument,
        Error::DimensionMismatch { .. } => HnaStatus::DimensionMismatch,
        Error::OutsideBall(_) | Error::Domain(_) | Error::StepUnderflow(_) => HnaStatus::Domain,
        Error::NonConvergence { .. } => HnaStatus::NonConvergence,
        Error::Quadrature(_) | Error::TailBound { .. } => HnaStatus::Quadrature,
    }
}

enum Fail {
    Status(HnaStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(HnaStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HnaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            HnaStatus::Ok
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("panic inside harmonic-na".into());
            HnaStatus::Panic
        }
    }
}

unsafe fn algebra<'a>(p: *const HnaAlgebra) -> Result<&'a HTypeAlgebra, Fail> {
    p.as_ref().map(|a| &a.0).ok_or_else(|| null("algebra"))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write<T>(p: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hna_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes) and returns its full length in bytes.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn hna_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Builds the algebra with center dimension `k` and `b` Clifford modules.
///
/// # Safety
/// `out` must be valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn hna_algebra_new(k: usize, b: usize, out: *mut *mut HnaAlgebra) -> HnaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let alg = build_htype(k, b)?;
        out.write(Box::into_raw(Box::new(HnaAlgebra(alg))));
        Ok(())
    })
}

/// Releases an algebra. Null is ignored.
///
/// # Safety
/// `alg` must come from [`hna_algebra_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hna_algebra_free(alg: *mut HnaAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Dimensions `m = dim v`, `k = dim z`, `n = m + k + 1` and `Q = m/2 + k`.
///
/// # Safety
/// `alg` must be a live handle; outputs must be valid or null (skipped).
#[no_mangle]
pub unsafe extern "C" fn hna_algebra_dims(
    alg: *const HnaAlgebra,
    m: *mut usize,
    k: *mut usize,
    n: *mut usize,
    q: *mut f64,
) -> HnaStatus {
    guard(|| {
        let a = algebra(alg)?;
        for (p, v) in [(m, a.m()), (k, a.k()), (n, a.n())] {
            if !p.is_null() {
                p.write(v);
            }
        }
        if !q.is_null() {
            q.write(a.q());
        }
        Ok(())
    })
}

/// Geodesic distance between two points of length `len = n`.
///
/// # Safety
/// `p`, `q` must be valid for `len` reads and `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn hna_distance(
    alg: *const HnaAlgebra,
    p: *const f64,
    q: *const f64,
    len: usize,
    out: *mut f64,
) -> HnaStatus {
    guard(|| {
        let a = algebra(alg)?;
        let p = NAPoint::from_flat(a, slice(p, len, "p")?)?;
        let q = NAPoint::from_flat(a, slice(q, len, "q")?)?;
        write(out, distance(a, &p, &q)?, "out")
    })
}

/// Cayley transform of `p` into the unit ball, written as `[X'…, Z'…, l']`.
///
/// # Safety
/// `p` must be valid for `len` reads and `out` for `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn hna_cayley(
    alg: *const HnaAlgebra,
    p: *const f64,
    len: usize,
    out: *mut f64,
    out_len: usize,
) -> HnaStatus {
    guard(|| {
        let a = algebra(alg)?;
        let b = cayley(a, &NAPoint::from_flat(a, slice(p, len, "p")?)?)?.to_flat();
        if out_len < b.len() {
            return Err(Fail::Status(
                HnaStatus::BufferTooSmall,
                format!("need {} slots, got {out_len}", b.len()),
            ));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        std::ptr::copy_nonoverlapping(b.as_ptr(), out, b.len());
        Ok(())
    })
}

/// `φ_λ(r)` for complex `λ`.
///
/// # Safety
/// `out_re`, `out_im` must be valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn hna_spherical_phi(
    alg: *const HnaAlgebra,
    lambda_re: f64,
    lambda_im: f64,
    r: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HnaStatus {
    guard(|| {
        let v = spherical_phi(algebra(alg)?, Complex64::new(lambda_re, lambda_im), r)?;
        write(out_re, v.re, "out_re")?;
        write(out_im, v.im, "out_im")
    })
}

/// Poisson kernel `P_a(X, Z)` with `X` of length `m` and `Z` of length `k`.
///
/// # Safety
/// `x`, `z` must be valid for `x_len`, `z_len` reads; `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn hna_poisson_kernel(
    alg: *const HnaAlgebra,
    a: f64,
    x: *const f64,
    x_len: usize,
    z: *const f64,
    z_len: usize,
    out: *mut f64,
) -> HnaStatus {
    guard(|| {
        let alg = algebra(alg)?;
        let v = poisson_kernel(alg, a, slice(x, x_len, "x")?, slice(z, z_len, "z")?)?;
        write(out, v, "out")
    })
}

/// Plancherel density `|c(λ)|^{-2}` at real `λ`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn hna_plancherel_density(alg: *const HnaAlgebra, lambda: f64, out: *mut f64) -> HnaStatus {
    guard(|| {
        let params = JacobiParams::from_algebra(algebra(alg)?);
        write(out, plancherel_density(&params, lambda), "out")
    })
}

/// `J_{ν+1/2}(z)` for integer `ν ≥ 0` and `z > 0`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn hna_bessel_half_integer(nu: u32, z: f64, out: *mut f64) -> HnaStatus {
    guard(|| write(out, bessel_half_integer(nu, z)?, "out"))
}

/// Slow-decrease check of `λ ↦ φ_λ(t)` with the witness `(A, B, C, D)` on
/// `[ξ_min, ξ_max]`. `pass` receives 1 or 0, `margin` the smallest log ratio
/// and `worst_xi` where it occurs.
///
/// # Safety
/// Output pointers must be valid or null (skipped).
#[no_mangle]
pub unsafe extern "C" fn hna_slow_decrease_phi(
    alg: *const HnaAlgebra,
    t: f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    xi_min: f64,
    xi_max: f64,
    pass: *mut i32,
    margin: *mut f64,
    worst_xi: *mut f64,
) -> HnaStatus {
    guard(|| {
        let params = JacobiParams::from_algebra(algebra(alg)?);
        let w = SlowDecreaseWitness::new(a, b, c, d, xi_min, xi_max)?;
        let f = spherical_phi_target(&params, t, w.reach() + 1.0)?;
        let s = check_slow_decrease(&f, &w)?;
        if !pass.is_null() {
            pass.write(i32::from(s.pass));
        }
        if !margin.is_null() {
            margin.write(s.margin);
        }
        if !worst_xi.is_null() {
            worst_xi.write(s.worst_xi);
        }
        Ok(())
    })
}
