//! C ABI over `flatcount`.
//!
//! Objects cross the boundary as opaque handles that the caller releases
//! with the matching `*_free` function. Every fallible call returns an
//! [`FcStatus`]; on failure, `fc_last_error_message` describes the error
//! until the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use flatcount::counting::{count_sector, SectorSpec};
use flatcount::exponents::{ExponentLedger, Variant};
use flatcount::saddle::{self, HolonomySet};
use flatcount::surface::{GroupElement, TranslationSurface};
use flatcount::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcStatus {
    Ok = 0,
    MalformedSpec = 1,
    NonMatchingEdge = 2,
    DisconnectedSurface = 3,
    NotUnimodular = 4,
    ToleranceBreakdown = 5,
    UnknownSingularity = 6,
    RadiusExceedsEnumeration = 7,
    SupportExceedsEnumeration = 8,
    InsufficientData = 9,
    ScheduleViolation = 10,
    EmptySample = 11,
    ZeroMassPsi = 12,
    InvalidArgument = 13,
    Io = 14,
    NullPointer = 15,
    InvalidUtf8 = 16,
    IndexOutOfRange = 17,
    Panic = 18,
}

impl From<&Error> for FcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::MalformedSpec(_) | Error::Json(_) => FcStatus::MalformedSpec,
            Error::NonMatchingEdge { .. } => FcStatus::NonMatchingEdge,
            Error::DisconnectedSurface { .. } => FcStatus::DisconnectedSurface,
            Error::NotUnimodular { .. } => FcStatus::NotUnimodular,
            Error::ToleranceBreakdown { .. } => FcStatus::ToleranceBreakdown,
            Error::UnknownSingularity(_) => FcStatus::UnknownSingularity,
            Error::RadiusExceedsEnumeration { .. } => FcStatus::RadiusExceedsEnumeration,
            Error::SupportExceedsEnumeration { .. } => FcStatus::SupportExceedsEnumeration,
            Error::InsufficientData(_) => FcStatus::InsufficientData,
            Error::ScheduleViolation(_) => FcStatus::ScheduleViolation,
            Error::EmptySample => FcStatus::EmptySample,
            Error::ZeroMassPsi => FcStatus::ZeroMassPsi,
            Error::InvalidArgument(_) => FcStatus::InvalidArgument,
            Error::Io(_) | Error::Csv(_) => FcStatus::Io,
        }
    }
}

/// Opaque surface handle.
pub struct FcSurface(TranslationSurface);

/// Opaque holonomy set handle.
pub struct FcHolonomySet(HolonomySet);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FcSaddleConnection {
    pub x: f64,
    pub y: f64,
    pub start: usize,
    pub end: usize,
    pub separatrix: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FcExponentLedger {
    pub lambda: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    pub eta: f64,
    pub eta1: f64,
    pub sigma: f64,
    pub kappa_sigma: f64,
    pub kappa_step3: f64,
    pub kappa: f64,
    pub summable: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (FcStatus, String)>) -> FcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FcStatus::Panic
        }
    }
}

fn lib(e: Error) -> (FcStatus, String) {
    (FcStatus::from(&e), e.to_string())
}

fn null(what: &str) -> (FcStatus, String) {
    (FcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (FcStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (FcStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a surface from a NUL-terminated JSON spec.
///
/// # Safety
/// `json` must be null or a valid C string; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fc_surface_from_json(json: *const c_char, out: *mut *mut FcSurface) -> FcStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (FcStatus::InvalidUtf8, e.to_string()))?;
        let s = TranslationSurface::from_json(text).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(FcSurface(s))))
    })
}

/// The unit square torus.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fc_surface_unit_torus(out: *mut *mut FcSurface) -> FcStatus {
    guard(|| write_out(out, Box::into_raw(Box::new(FcSurface(TranslationSurface::unit_torus())))))
}

/// Releases a surface. Null is ignored.
///
/// # Safety
/// `s` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fc_surface_free(s: *mut FcSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// `g·s` for `g = [[a, b], [c, d]]` in SL(2,R), as a new handle.
///
/// # Safety
/// `s` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fc_surface_apply(
    s: *const FcSurface,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    out: *mut *mut FcSurface,
) -> FcStatus {
    guard(|| {
        let s = deref(s, "surface")?;
        let g = GroupElement::new(a, b, c, d).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(FcSurface(s.0.apply_group(&g)))))
    })
}

/// Genus of the surface.
///
/// # Safety
/// `s` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fc_surface_genus(s: *const FcSurface, out: *mut usize) -> FcStatus {
    guard(|| write_out(out, deref(s, "surface")?.0.genus()))
}

/// Area of the surface.
///
/// # Safety
/// `s` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fc_surface_area(s: *const FcSurface, out: *mut f64) -> FcStatus {
    guard(|| write_out(out, deref(s, "surface")?.0.area()))
}

/// Length of the shortest saddle connection.
///
/// # Safety
/// `s` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fc_surface_systole(s: *const FcSurface, out: *mut f64) -> FcStatus {
    guard(|| write_out(out, deref(s, "surface")?.0.systole(1.0)))
}

/// Saddle connections of norm at most `t`.
///
/// # Safety
/// `s` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fc_enumerate(s: *const FcSurface, t: f64, out: *mut *mut FcHolonomySet) -> FcStatus {
    guard(|| {
        let h = saddle::enumerate(&deref(s, "surface")?.0, t).map_err(lib)?;
        write_out(out, Box::into_raw(Box::new(FcHolonomySet(h))))
    })
}

/// Releases a holonomy set. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fc_holonomy_set_free(h: *mut FcHolonomySet) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of elements, or 0 for null.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fc_holonomy_set_len(h: *const FcHolonomySet) -> usize {
    h.as_ref().map_or(0, |h| h.0.len())
}

/// Element `i` in (norm, angle) order.
///
/// # Safety
/// `h` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fc_holonomy_set_get(
    h: *const FcHolonomySet,
    i: usize,
    out: *mut FcSaddleConnection,
) -> FcStatus {
    guard(|| {
        let h = deref(h, "holonomy set")?;
        let e = h
            .0
            .elements()
            .get(i)
            .ok_or_else(|| (FcStatus::IndexOutOfRange, format!("index {i} out of range {}", h.0.len())))?;
        write_out(
            out,
            FcSaddleConnection {
                x: e.holonomy.x,
                y: e.holonomy.y,
                start: e.start,
                end: e.end,
                separatrix: e.separatrix,
            },
        )
    })
}

/// Elements of norm at most `t` with direction in `[phi1, phi2)`.
///
/// # Safety
/// `h` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fc_count_sector(
    h: *const FcHolonomySet,
    t: f64,
    phi1: f64,
    phi2: f64,
    out: *mut usize,
) -> FcStatus {
    guard(|| {
        let h = deref(h, "holonomy set")?;
        let sec = SectorSpec::new(phi1, phi2).map_err(lib)?;
        write_out(out, count_sector(&h.0, t, &sec).map_err(lib)?)
    })
}

/// Exponent ledger for spectral gap `lambda`; `uniform` selects the
/// uniform-in-direction variant.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn fc_exponent_ledger(
    lambda: f64,
    alpha1: f64,
    alpha2: f64,
    uniform: bool,
    out: *mut FcExponentLedger,
) -> FcStatus {
    guard(|| {
        let v = if uniform { Variant::Uniform } else { Variant::Sector };
        let l = ExponentLedger::new(v, lambda, alpha1, alpha2).map_err(lib)?;
        write_out(
            out,
            FcExponentLedger {
                lambda: l.lambda,
                alpha1: l.alpha1,
                alpha2: l.alpha2,
                beta: l.beta,
                eta: l.eta,
                eta1: l.eta1,
                sigma: l.sigma,
                kappa_sigma: l.kappa_sigma,
                kappa_step3: l.kappa_step3,
                kappa: l.kappa,
                summable: l.summable,
            },
        )
    })
}
