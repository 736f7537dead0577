//! C ABI over the surface library: opaque handles, integer error codes and
//! a per-thread error message.  The generated header lives in
//! `include/minsurf.h`.

use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, CStr, CString};
use std::ptr;

use minsurf::cli::{parse_surface, surface_to_csv};
use minsurf::surface::{point_invariants, sample};
use minsurf::weier::{build_phi, validate, GridSpec, WeierData};
use minsurf::Error;

/// Error codes mirrored from the CLI exit codes.
pub const MINSURF_OK: c_int = 0;
pub const MINSURF_ERR_CONDITION: c_int = 1;
pub const MINSURF_ERR_PARSE: c_int = 2;
pub const MINSURF_ERR_DEGENERATE: c_int = 3;
pub const MINSURF_ERR_NUMERICAL: c_int = 4;
pub const MINSURF_ERR_NOT_CONGRUENT: c_int = 5;
pub const MINSURF_ERR_ARGUMENT: c_int = -1;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(e: &Error) -> c_int {
    let msg = CString::new(e.to_string()).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
    match e {
        Error::Syntax { .. }
        | Error::UnknownFunction(_)
        | Error::NonIntegerExponent { .. }
        | Error::Config(_)
        | Error::Io(_)
        | Error::UnsupportedDirection { .. } => MINSURF_ERR_PARSE,
        Error::ConditionViolated { .. } => MINSURF_ERR_CONDITION,
        Error::DegeneratePoint { .. } | Error::DegenerateMetric(_) => MINSURF_ERR_DEGENERATE,
        Error::NotCongruent(_)
        | Error::NotCanonical(_)
        | Error::NotUnimodular(_)
        | Error::SingularMatrix => MINSURF_ERR_NOT_CONGRUENT,
        _ => MINSURF_ERR_NUMERICAL,
    }
}

/// An opaque surface: Weierstrass data plus its default grid.
pub struct MinsurfSurface {
    data: WeierData,
    grid: GridSpec,
}

/// Parses a TOML surface description.  On success writes a new handle to
/// `out` and returns 0; the handle must be released with
/// `minsurf_surface_free`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn minsurf_surface_parse(
    text: *const c_char,
    out: *mut *mut MinsurfSurface,
) -> c_int {
    if text.is_null() || out.is_null() {
        return MINSURF_ERR_ARGUMENT;
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        return MINSURF_ERR_ARGUMENT;
    };
    match parse_surface(text) {
        Ok((data, grid)) => {
            *out = Box::into_raw(Box::new(MinsurfSurface { data, grid }));
            MINSURF_OK
        }
        Err(e) => {
            *out = ptr::null_mut();
            set_error(&e)
        }
    }
}

/// Releases a handle obtained from `minsurf_surface_parse`.
///
/// # Safety
/// `surface` must be a handle from this library or null; it must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn minsurf_surface_free(surface: *mut MinsurfSurface) {
    if !surface.is_null() {
        drop(Box::from_raw(surface));
    }
}

/// Runs the validity conditions over the surface's grid: 0 when clean,
/// 1 when any node is flagged.
///
/// # Safety
/// `surface` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn minsurf_surface_validate(surface: *const MinsurfSurface) -> c_int {
    let Some(s) = surface.as_ref() else {
        return MINSURF_ERR_ARGUMENT;
    };
    if validate(&s.data, s.grid).ok() {
        MINSURF_OK
    } else {
        MINSURF_ERR_CONDITION
    }
}

/// Evaluates Phi and Phi' at t = u + iv: 16 doubles, interleaved
/// re/im of the four components of Phi then of Phi'.
///
/// # Safety
/// `surface` must be a valid handle and `out` must point to 16 doubles.
#[no_mangle]
pub unsafe extern "C" fn minsurf_surface_phi(
    surface: *const MinsurfSurface,
    u: c_double,
    v: c_double,
    out: *mut c_double,
) -> c_int {
    let Some(s) = surface.as_ref() else {
        return MINSURF_ERR_ARGUMENT;
    };
    if out.is_null() {
        return MINSURF_ERR_ARGUMENT;
    }
    match build_phi(&s.data, num_complex::Complex64::new(u, v)) {
        Ok((phi, dphi)) => {
            let slice = std::slice::from_raw_parts_mut(out, 16);
            for k in 0..4 {
                slice[2 * k] = phi.c[k].re;
                slice[2 * k + 1] = phi.c[k].im;
                slice[8 + 2 * k] = dphi.c[k].re;
                slice[8 + 2 * k + 1] = dphi.c[k].im;
            }
            MINSURF_OK
        }
        Err(e) => set_error(&e),
    }
}

/// Pointwise invariants at t = u + iv: writes E, K and kappa.
///
/// # Safety
/// `surface` must be a valid handle; `e`, `k`, `kappa` must be valid
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn minsurf_surface_invariants(
    surface: *const MinsurfSurface,
    u: c_double,
    v: c_double,
    e: *mut c_double,
    k: *mut c_double,
    kappa: *mut c_double,
) -> c_int {
    let Some(s) = surface.as_ref() else {
        return MINSURF_ERR_ARGUMENT;
    };
    if e.is_null() || k.is_null() || kappa.is_null() {
        return MINSURF_ERR_ARGUMENT;
    }
    let result = build_phi(&s.data, num_complex::Complex64::new(u, v))
        .and_then(|(phi, dphi)| point_invariants(&phi, &dphi));
    match result {
        Ok(inv) => {
            *e = inv.e;
            *k = inv.k;
            *kappa = inv.kappa;
            MINSURF_OK
        }
        Err(e) => set_error(&e),
    }
}

/// Samples the surface over its grid with base point t0 = u0 + iv0 and
/// returns the CSV as a newly allocated string; release it with
/// `minsurf_string_free`.
///
/// # Safety
/// `surface` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn minsurf_surface_sample_csv(
    surface: *const MinsurfSurface,
    u0: c_double,
    v0: c_double,
    out: *mut *mut c_char,
) -> c_int {
    let Some(s) = surface.as_ref() else {
        return MINSURF_ERR_ARGUMENT;
    };
    if out.is_null() {
        return MINSURF_ERR_ARGUMENT;
    }
    match sample(&s.data, s.grid, num_complex::Complex64::new(u0, v0)) {
        Ok(grid) => {
            let csv = surface_to_csv(&grid);
            *out = CString::new(csv).unwrap_or_default().into_raw();
            MINSURF_OK
        }
        Err(e) => {
            *out = ptr::null_mut();
            set_error(&e)
        }
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library or be null; it must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn minsurf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message of the most recent error on this thread, or null.  The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn minsurf_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(ptr::null())
    })
}
