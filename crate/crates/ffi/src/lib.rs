//! C ABI for the measurement-driven two-spin heat engine.
//!
//! Objects are opaque handles created by `*_new` and released by `*_free`.
//! Every fallible call returns a [`QmeStatus`]; on failure a message for the
//! calling thread is available from [`qme_last_error_message`]. Outputs are
//! written through caller-provided pointers and only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qmengine::analysis::{effective_cold_temperature, local_works};
use qmengine::closed_forms::evaluate_named;
use qmengine::engine::{run_cycle, CyclePoint, Efficiency};
use qmengine::measurement::{local_scheme, MeasurementScheme, SideMeasurement};
use qmengine::medium::{FieldPoint, WorkingMedium};
use qmengine::spin::{Direction, SpinValue};
use qmengine::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    InvalidSpin = 3,
    InvalidBeta = 4,
    DimensionMismatch = 5,
    IncompleteScheme = 6,
    NonHermitian = 7,
    NoConvergence = 8,
    UnsupportedPair = 9,
    UnknownId = 10,
    EfficiencyUndefined = 11,
    /// No solution exists (for example no effective cold temperature).
    NotFound = 12,
    /// The output buffer is too small; the required length was reported.
    BufferTooSmall = 13,
    /// A Rust panic was caught at the boundary.
    Internal = 14,
}

impl From<&Error> for QmeStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NonHermitian { .. } => QmeStatus::NonHermitian,
            Error::NoConvergence { .. } => QmeStatus::NoConvergence,
            Error::DimensionMismatch(_) => QmeStatus::DimensionMismatch,
            Error::IncompleteScheme { .. } => QmeStatus::IncompleteScheme,
            Error::InvalidBeta(_) => QmeStatus::InvalidBeta,
            Error::InvalidSpin(_) => QmeStatus::InvalidSpin,
            Error::UnsupportedPair(..) => QmeStatus::UnsupportedPair,
            Error::EfficiencyUndefined { .. } => QmeStatus::EfficiencyUndefined,
            Error::UnknownId(_) => QmeStatus::UnknownId,
            Error::InvalidInput(_) => QmeStatus::InvalidInput,
        }
    }
}

/// Measurement applied to one subsystem.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmeAxis {
    X = 0,
    Y = 1,
    Z = 2,
    /// Projective measurement along (theta, phi).
    Angles = 3,
    /// Qubit SIC-POVM; spin 1/2 only.
    Sic = 4,
}

/// One side of a local measurement scheme. `theta` and `phi` (radians) are
/// read only when `axis` is `QME_AXIS_ANGLES`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QmeSide {
    pub axis: QmeAxis,
    pub theta: f64,
    pub phi: f64,
}

/// Energetics of one cycle. `eta` is NaN when `eta_defined` is 0.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QmeCycleResult {
    pub w1: f64,
    pub w2: f64,
    pub wt: f64,
    pub qm: f64,
    pub qt: f64,
    pub eta: f64,
    pub eta_defined: i32,
}

/// Heat exchanged by each subsystem and the resulting local works.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QmeLocalWorks {
    pub q_a1: f64,
    pub q_a2: f64,
    pub q_b1: f64,
    pub q_b2: f64,
    pub w_a: f64,
    pub w_b: f64,
    pub w_global: f64,
}

/// Opaque coupled spin pair.
pub struct QmeMedium(WorkingMedium);

/// Opaque measurement scheme bound to a medium's dimension.
pub struct QmeScheme(MeasurementScheme);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Runs `f` behind a panic guard, mapping errors to status codes.
fn guard(f: impl FnOnce() -> Result<(), QmeStatus>) -> QmeStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QmeStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            QmeStatus::Internal
        }
    }
}

fn fail(e: Error) -> QmeStatus {
    let s = QmeStatus::from(&e);
    set_error(e.to_string());
    s
}

fn fail_with(status: QmeStatus, msg: &str) -> QmeStatus {
    set_error(msg.into());
    status
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, QmeStatus> {
    p.as_ref().ok_or_else(|| fail_with(QmeStatus::NullPointer, &format!("{what} is null")))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, QmeStatus> {
    p.as_mut().ok_or_else(|| fail_with(QmeStatus::NullPointer, &format!("{what} is null")))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, QmeStatus> {
    if p.is_null() {
        return Err(fail_with(QmeStatus::NullPointer, &format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail_with(QmeStatus::InvalidInput, &format!("{what} is not valid UTF-8")))
}

fn side(s: QmeSide) -> Result<SideMeasurement, QmeStatus> {
    Ok(match s.axis {
        QmeAxis::X => SideMeasurement::X,
        QmeAxis::Y => SideMeasurement::Y,
        QmeAxis::Z => SideMeasurement::Z,
        QmeAxis::Sic => SideMeasurement::Sic,
        QmeAxis::Angles => SideMeasurement::Angles(Direction::new(s.theta, s.phi).map_err(fail)?),
    })
}

fn cycle_point(m: &QmeMedium, s: &QmeScheme, b1: f64, b2: f64, beta: f64) -> Result<CyclePoint, QmeStatus> {
    CyclePoint::new(m.0.clone(), b1, b2, beta, s.0.clone()).map_err(fail)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qme_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL after a
/// successful call. Valid until the next call into the library on this
/// thread.
#[no_mangle]
pub extern "C" fn qme_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates a spin pair with spins `twice_a / 2` and `twice_b / 2` and
/// exchange coupling `j`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qme_medium_new(
    twice_a: u32,
    twice_b: u32,
    j: f64,
    out: *mut *mut QmeMedium,
) -> QmeStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let a = SpinValue::new(twice_a).map_err(fail)?;
        let b = SpinValue::new(twice_b).map_err(fail)?;
        let m = WorkingMedium::new(a, b, j).map_err(fail)?;
        *out = Box::into_raw(Box::new(QmeMedium(m)));
        Ok(())
    })
}

/// Releases a medium. NULL is ignored.
///
/// # Safety
/// `m` must come from `qme_medium_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qme_medium_free(m: *mut QmeMedium) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Hilbert-space dimension of the pair, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live medium.
#[no_mangle]
pub unsafe extern "C" fn qme_medium_dimension(m: *const QmeMedium) -> usize {
    m.as_ref().map_or(0, |m| m.0.dimension())
}

/// Writes the ascending energy levels at field `b` into `values`. `len` is
/// the capacity of `values`; the dimension is always stored in `written`,
/// and `QME_STATUS_BUFFER_TOO_SMALL` is returned when it exceeds `len`.
///
/// # Safety
/// `m` must be a live medium, `values` valid for `len` writes and
/// `written` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qme_medium_spectrum(
    m: *const QmeMedium,
    b: f64,
    values: *mut f64,
    len: usize,
    written: *mut usize,
) -> QmeStatus {
    guard(|| {
        let m = deref(m, "medium")?;
        let written = out_ref(written, "written")?;
        let field = FieldPoint::new(b).map_err(fail)?;
        let levels = m.0.spectrum(field).map_err(fail)?.eigenvalues;
        *written = levels.len();
        if len < levels.len() {
            return Err(fail_with(QmeStatus::BufferTooSmall, "spectrum buffer too small"));
        }
        if values.is_null() {
            return Err(fail_with(QmeStatus::NullPointer, "values is null"));
        }
        std::slice::from_raw_parts_mut(values, levels.len()).copy_from_slice(&levels);
        Ok(())
    })
}

/// Builds the local scheme `a ⊗ b` for the medium's spin pair.
///
/// # Safety
/// `m` must be a live medium and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qme_scheme_new(
    m: *const QmeMedium,
    a: QmeSide,
    b: QmeSide,
    out: *mut *mut QmeScheme,
) -> QmeStatus {
    guard(|| {
        let m = deref(m, "medium")?;
        let out = out_ref(out, "out")?;
        let s = local_scheme(&m.0, side(a)?, side(b)?).map_err(fail)?;
        *out = Box::into_raw(Box::new(QmeScheme(s)));
        Ok(())
    })
}

/// Like `qme_scheme_new`, with each side given as text: `x`, `y`, `z`,
/// `sic` or `theta=<rad>,phi=<rad>`.
///
/// # Safety
/// `m` must be a live medium, `a` and `b` NUL-terminated strings and
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qme_scheme_parse(
    m: *const QmeMedium,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut QmeScheme,
) -> QmeStatus {
    guard(|| {
        let m = deref(m, "medium")?;
        let out = out_ref(out, "out")?;
        let a: SideMeasurement = c_str(a, "a")?.parse().map_err(fail)?;
        let b: SideMeasurement = c_str(b, "b")?.parse().map_err(fail)?;
        let s = local_scheme(&m.0, a, b).map_err(fail)?;
        *out = Box::into_raw(Box::new(QmeScheme(s)));
        Ok(())
    })
}

/// Releases a scheme. NULL is ignored.
///
/// # Safety
/// `s` must come from `qme_scheme_new` or `qme_scheme_parse` and not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qme_scheme_free(s: *mut QmeScheme) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Runs one cycle between fields `b1` and `b2` at inverse temperature `beta`.
///
/// # Safety
/// `m` and `s` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qme_run_cycle(
    m: *const QmeMedium,
    s: *const QmeScheme,
    b1: f64,
    b2: f64,
    beta: f64,
    out: *mut QmeCycleResult,
) -> QmeStatus {
    guard(|| {
        let p = cycle_point(deref(m, "medium")?, deref(s, "scheme")?, b1, b2, beta)?;
        let out = out_ref(out, "out")?;
        let r = run_cycle(&p).map_err(fail)?;
        let (eta, eta_defined) = match r.eta {
            Efficiency::Defined(v) => (v, 1),
            Efficiency::Undefined => (f64::NAN, 0),
        };
        *out = QmeCycleResult { w1: r.w1, w2: r.w2, wt: r.wt, qm: r.qm, qt: r.qt, eta, eta_defined };
        Ok(())
    })
}

/// Per-subsystem heats and works for one cycle.
///
/// # Safety
/// `m` and `s` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qme_local_works(
    m: *const QmeMedium,
    s: *const QmeScheme,
    b1: f64,
    b2: f64,
    beta: f64,
    out: *mut QmeLocalWorks,
) -> QmeStatus {
    guard(|| {
        let p = cycle_point(deref(m, "medium")?, deref(s, "scheme")?, b1, b2, beta)?;
        let out = out_ref(out, "out")?;
        let l = local_works(&p).map_err(fail)?;
        *out = QmeLocalWorks {
            q_a1: l.q_a1,
            q_a2: l.q_a2,
            q_b1: l.q_b1,
            q_b2: l.q_b2,
            w_a: l.w_a,
            w_b: l.w_b,
            w_global: l.w_global,
        };
        Ok(())
    })
}

/// Temperature `t2 <= 1/beta` at which the thermal energy at `b2` exceeds
/// the ground energy by the measurement energy. Returns
/// `QME_STATUS_NOT_FOUND` when no such temperature exists. `residual` may
/// be NULL.
///
/// # Safety
/// `m` and `s` must be live handles, `t2` valid for writes and `residual`
/// NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qme_effective_cold_temperature(
    m: *const QmeMedium,
    s: *const QmeScheme,
    b1: f64,
    b2: f64,
    beta: f64,
    t2: *mut f64,
    residual: *mut f64,
) -> QmeStatus {
    guard(|| {
        let p = cycle_point(deref(m, "medium")?, deref(s, "scheme")?, b1, b2, beta)?;
        let t2 = out_ref(t2, "t2")?;
        let r = effective_cold_temperature(&p).map_err(fail)?;
        match (r.t2, r.residual) {
            (Some(t), Some(res)) => {
                *t2 = t;
                if let Some(out) = residual.as_mut() {
                    *out = res;
                }
                Ok(())
            }
            _ => Err(fail_with(QmeStatus::NotFound, "no effective cold temperature in (0, T]")),
        }
    })
}

/// Evaluates the named closed-form expression (for example `"eta_xz_hh"`).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qme_closed_form(
    name: *const c_char,
    j: f64,
    b1: f64,
    b2: f64,
    out: *mut f64,
) -> QmeStatus {
    guard(|| {
        let name = c_str(name, "name")?;
        let out = out_ref(out, "out")?;
        *out = evaluate_named(name, j, b1, b2).map_err(fail)?;
        Ok(())
    })
}
