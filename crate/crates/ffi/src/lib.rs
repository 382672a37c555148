//! C ABI for capaflat.
//!
//! Metrics and capacitary potentials are opaque handles created by
//! `capaflat_*_new`/`capaflat_metric_*` constructors and released with the
//! matching `_free` function. Every fallible call returns a
//! [`CapaflatStatus`] and writes results through out-pointers; on failure a
//! description is available from [`capaflat_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use capaflat::bounds::{
    bray_miao_bound, max_capacity_round, round_data_to_schwarzschild, schwarzschild_bartnik_data,
    BartnikDataRound,
};
use capaflat::config::MetricSpec;
use capaflat::harmonicstatic::{example_flat, example_schwarzschild, example_sphere, linear_grid};
use capaflat::potential::{capacitary_potential, capacity_energy, capacity_quadrature};
use capaflat::variation::flow_variation;
use capaflat::{CapacitaryPotential, Error, Quadrature, RadialMetric, SchwarzschildParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapaflatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    UnsupportedFamily = 3,
    CapacityUndefined = 4,
    Convergence = 5,
    Extrapolation = 6,
    Newton = 7,
    BoundaryMismatch = 8,
    StepFailure = 9,
    Evaluation = 10,
    Panic = 11,
}

impl From<&Error> for CapaflatStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Evaluation { .. } => CapaflatStatus::Evaluation,
            Error::UnsupportedFamily => CapaflatStatus::UnsupportedFamily,
            Error::CapacityUndefined(_) => CapaflatStatus::CapacityUndefined,
            Error::Convergence { .. } => CapaflatStatus::Convergence,
            Error::Extrapolation { .. } => CapaflatStatus::Extrapolation,
            Error::Newton { .. } => CapaflatStatus::Newton,
            Error::BoundaryMismatch { .. } => CapaflatStatus::BoundaryMismatch,
            Error::StepFailure { .. } => CapaflatStatus::StepFailure,
            Error::InvalidInput(_) => CapaflatStatus::InvalidInput,
        }
    }
}

/// Radial metric handle.
pub struct CapaflatMetric {
    inner: RadialMetric,
}

/// Capacitary potential handle; owns a copy of its metric.
pub struct CapaflatPotential {
    inner: CapacitaryPotential,
}

/// Closed-form harmonic-static examples.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapaflatHsExample {
    Flat = 0,
    Schwarzschild = 1,
    Sphere = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), CapaflatStatus>) -> CapaflatStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CapaflatStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            CapaflatStatus::Panic
        }
    }
}

fn lib<T>(r: capaflat::Result<T>) -> Result<T, CapaflatStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        CapaflatStatus::from(&e)
    })
}

fn quadrature(tol: f64) -> Quadrature {
    if tol > 0.0 && tol.is_finite() {
        Quadrature::with_tol(tol)
    } else {
        Quadrature::default()
    }
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), CapaflatStatus> {
    if out.is_null() {
        set_error("null output pointer".into());
        return Err(CapaflatStatus::NullPointer);
    }
    // SAFETY: non-null and, per the caller contract, valid for writes
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, CapaflatStatus> {
    // SAFETY: caller guarantees `p` is null or a live handle
    unsafe { p.as_ref() }.ok_or_else(|| {
        set_error("null handle".into());
        CapaflatStatus::NullPointer
    })
}

fn new_metric(metric: RadialMetric) -> *mut CapaflatMetric {
    Box::into_raw(Box::new(CapaflatMetric { inner: metric }))
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn capaflat_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn capaflat_status_name(status: CapaflatStatus) -> *const c_char {
    let s: &'static CStr = match status {
        CapaflatStatus::Ok => c"ok",
        CapaflatStatus::NullPointer => c"null pointer",
        CapaflatStatus::InvalidInput => c"invalid input",
        CapaflatStatus::UnsupportedFamily => c"unsupported metric family",
        CapaflatStatus::CapacityUndefined => c"capacity undefined",
        CapaflatStatus::Convergence => c"quadrature did not converge",
        CapaflatStatus::Extrapolation => c"extrapolation did not converge",
        CapaflatStatus::Newton => c"Newton iteration failed",
        CapaflatStatus::BoundaryMismatch => c"boundary metric mismatch",
        CapaflatStatus::StepFailure => c"integration step failed",
        CapaflatStatus::Evaluation => c"non-finite evaluation",
        CapaflatStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Euclidean exterior of the ball of radius `r0`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn capaflat_metric_flat(r0: f64, out: *mut *mut CapaflatMetric) -> CapaflatStatus {
    guard(|| {
        let m = lib(RadialMetric::flat(r0))?;
        unsafe { write(out, new_metric(m)) }
    })
}

/// Schwarzschild exterior of the isotropic sphere of radius `r0`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn capaflat_metric_schwarzschild(
    m: f64,
    r0: f64,
    out: *mut *mut CapaflatMetric,
) -> CapaflatStatus {
    guard(|| {
        let metric = lib(SchwarzschildParams::new(m, r0).and_then(RadialMetric::schwarzschild))?;
        unsafe { write(out, new_metric(metric)) }
    })
}

/// Band `r0 <= r <= r1` of the unit 3-sphere, `dr^2 + cos(r)^2 dσ^2`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn capaflat_metric_sphere_band(
    r0: f64,
    r1: f64,
    out: *mut *mut CapaflatMetric,
) -> CapaflatStatus {
    guard(|| {
        let metric = lib(RadialMetric::unit_sphere_band(r0, r1))?;
        unsafe { write(out, new_metric(metric)) }
    })
}

/// Metric from a JSON specification such as
/// `{"spec":"schwarzschild","m":2,"r0":1,"r1":"inf"}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writing
/// one pointer.
#[no_mangle]
pub unsafe extern "C" fn capaflat_metric_from_json(
    json: *const c_char,
    out: *mut *mut CapaflatMetric,
) -> CapaflatStatus {
    guard(|| {
        if json.is_null() {
            set_error("null JSON string".into());
            return Err(CapaflatStatus::NullPointer);
        }
        // SAFETY: caller guarantees a NUL-terminated string
        let text = unsafe { CStr::from_ptr(json) }.to_str().map_err(|_| {
            set_error("JSON is not valid UTF-8".into());
            CapaflatStatus::InvalidInput
        })?;
        let metric = lib(MetricSpec::from_json(text).and_then(|s| s.build()))?;
        unsafe { write(out, new_metric(metric)) }
    })
}

/// # Safety
/// `metric` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn capaflat_metric_free(metric: *mut CapaflatMetric) {
    if !metric.is_null() {
        // SAFETY: the handle was created by Box::into_raw
        drop(unsafe { Box::from_raw(metric) });
    }
}

/// Capacity of the inner sphere. A nonpositive `tol` selects the default
/// quadrature tolerance.
///
/// # Safety
/// `metric` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn capaflat_capacity(
    metric: *const CapaflatMetric,
    tol: f64,
    out: *mut f64,
) -> CapaflatStatus {
    guard(|| {
        let m = unsafe { borrow(metric) }?;
        let cap = lib(capacity_quadrature(&m.inner, &quadrature(tol)))?;
        unsafe { write(out, cap) }
    })
}

/// `d/dr` of the capacity of the sphere of radius `r` as it moves outward.
///
/// # Safety
/// `metric` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn capaflat_flow_variation(
    metric: *const CapaflatMetric,
    r: f64,
    tol: f64,
    out: *mut f64,
) -> CapaflatStatus {
    guard(|| {
        let m = unsafe { borrow(metric) }?;
        let v = lib(flow_variation(&m.inner, r, &quadrature(tol)))?;
        unsafe { write(out, v) }
    })
}

/// Capacitary potential of `metric`.
///
/// # Safety
/// `metric` must be a live handle; `out` must be valid for writing one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn capaflat_potential_new(
    metric: *const CapaflatMetric,
    tol: f64,
    out: *mut *mut CapaflatPotential,
) -> CapaflatStatus {
    guard(|| {
        let m = unsafe { borrow(metric) }?;
        let pot = lib(capacitary_potential(&m.inner, &quadrature(tol)))?;
        unsafe { write(out, Box::into_raw(Box::new(CapaflatPotential { inner: pot }))) }
    })
}

/// # Safety
/// `potential` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn capaflat_potential_free(potential: *mut CapaflatPotential) {
    if !potential.is_null() {
        // SAFETY: the handle was created by Box::into_raw
        drop(unsafe { Box::from_raw(potential) });
    }
}

/// # Safety
/// `potential` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn capaflat_potential_cap(
    potential: *const CapaflatPotential,
    out: *mut f64,
) -> CapaflatStatus {
    guard(|| {
        let p = unsafe { borrow(potential) }?;
        unsafe { write(out, p.inner.cap()) }
    })
}

/// Value of the potential at `r`.
///
/// # Safety
/// `potential` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn capaflat_potential_phi(
    potential: *const CapaflatPotential,
    r: f64,
    out: *mut f64,
) -> CapaflatStatus {
    guard(|| {
        let p = unsafe { borrow(potential) }?;
        let v = lib(p.inner.phi(r))?;
        unsafe { write(out, v) }
    })
}

/// Radial derivative of the potential at `r`.
///
/// # Safety
/// `potential` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn capaflat_potential_dphi(
    potential: *const CapaflatPotential,
    r: f64,
    out: *mut f64,
) -> CapaflatStatus {
    guard(|| {
        let p = unsafe { borrow(potential) }?;
        lib(p.inner.phi(r))?; // domain check
        unsafe { write(out, p.inner.dphi(r)) }
    })
}

/// Capacity as the Dirichlet energy of the potential over `4π`.
///
/// # Safety
/// `potential` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn capaflat_capacity_energy(
    potential: *const CapaflatPotential,
    out: *mut f64,
) -> CapaflatStatus {
    guard(|| {
        let p = unsafe { borrow(potential) }?;
        let v = lib(capacity_energy(&p.inner, p.inner.quadrature()))?;
        unsafe { write(out, v) }
    })
}

/// Bray–Miao bound for round data with constant mean curvature `h`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn capaflat_bray_miao_bound(area: f64, h: f64, out: *mut f64) -> CapaflatStatus {
    guard(|| {
        let v = lib(BartnikDataRound::new(area, h).and_then(|d| bray_miao_bound(&d)))?;
        unsafe { write(out, v) }
    })
}

/// Maximal capacity over rotationally symmetric extensions of round data.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn capaflat_max_capacity_round(area: f64, h: f64, out: *mut f64) -> CapaflatStatus {
    guard(|| {
        let v = lib(BartnikDataRound::new(area, h).and_then(|d| max_capacity_round(&d)))?;
        unsafe { write(out, v) }
    })
}

/// Area and mean curvature of the Schwarzschild sphere at `r0`.
///
/// # Safety
/// `area_out` and `h_out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn capaflat_schwarzschild_bartnik_data(
    m: f64,
    r0: f64,
    area_out: *mut f64,
    h_out: *mut f64,
) -> CapaflatStatus {
    guard(|| {
        let d = lib(SchwarzschildParams::new(m, r0).and_then(schwarzschild_bartnik_data))?;
        unsafe {
            write(area_out, d.area)?;
            write(h_out, d.h)
        }
    })
}

/// Schwarzschild mass and radius whose sphere carries the round data.
///
/// # Safety
/// `m_out` and `r0_out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn capaflat_round_data_to_schwarzschild(
    area: f64,
    h: f64,
    m_out: *mut f64,
    r0_out: *mut f64,
) -> CapaflatStatus {
    guard(|| {
        let p = lib(BartnikDataRound::new(area, h).and_then(|d| round_data_to_schwarzschild(&d)))?;
        unsafe {
            write(m_out, p.m)?;
            write(r0_out, p.r0)
        }
    })
}

/// Sup norm of the harmonic-static residual of a closed-form example on
/// `n + 1` evenly spaced radii in `[lo, hi]`. `m` and `r0` are ignored where
/// they do not apply; `c` is the kernel coefficient.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn capaflat_hs_example_residual(
    example: CapaflatHsExample,
    m: f64,
    r0: f64,
    c: f64,
    lo: f64,
    hi: f64,
    n: usize,
    out: *mut f64,
) -> CapaflatStatus {
    guard(|| {
        let pair = lib(match example {
            CapaflatHsExample::Flat => example_flat(r0, c),
            CapaflatHsExample::Schwarzschild => SchwarzschildParams::new(m, r0).and_then(|p| example_schwarzschild(p, c)),
            CapaflatHsExample::Sphere => example_sphere(c),
        })?;
        if n == 0 {
            set_error("need at least one interval".into());
            return Err(CapaflatStatus::InvalidInput);
        }
        let res = lib(pair.residual(&linear_grid(lo, hi, n)))?;
        unsafe { write(out, res.sup_norm) }
    })
}
