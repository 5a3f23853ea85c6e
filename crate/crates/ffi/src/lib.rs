//! C ABI for `qutrit-dsd`.
//!
//! States live behind opaque `QdDensityMatrix` handles created by the
//! constructor functions and released with `qd_density_matrix_free`. Every
//! fallible function returns a `QdStatus`; on failure the message is available
//! from `qd_last_error_message` on the same thread. Matrices cross the
//! boundary as two row-major arrays of 81 doubles (real and imaginary parts)
//! in the basis `|2,2>, |2,1>, ..., |0,0>`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qutrit_dsd::dsd::{classify, TrajectoryType};
use qutrit_dsd::dynamics::{propagate_closed_form, DecayParams};
use qutrit_dsd::linalg::{ComplexMatrix, C64};
use qutrit_dsd::measures::{ccnr_score, is_ppt, negativity};
use qutrit_dsd::states::{
    horodecki_state, horodecki_state_rotated, isotropic_state, parse_density_matrix, DensityMatrix, DIM,
};
use qutrit_dsd::Error;

/// Number of entries in a two-qutrit matrix.
pub const QD_MATRIX_LEN: usize = 81;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    ParseError = 4,
    NoConvergence = 5,
    AccuracyLoss = 6,
    NumericError = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QdTrajectoryType {
    NptForever = 0,
    EsdNoDsd = 1,
    DsdThenUndetected = 2,
}

/// Trajectory classification. Optional times come with a `has_` flag; the
/// time field is NaN when the flag is false.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct QdDsdReport {
    pub has_t_n: bool,
    pub t_n: f64,
    pub has_t_r: bool,
    pub t_r: f64,
    pub has_window: bool,
    pub window_start: f64,
    pub window_end: f64,
    pub trajectory_type: QdTrajectoryType,
    pub entanglement_after_tn_unknown: bool,
    pub initially_ppt: bool,
    pub non_monotone: bool,
    pub horizon: f64,
}

/// Opaque two-qutrit density matrix.
pub struct QdDensityMatrix {
    inner: DensityMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> QdStatus {
    match err {
        Error::Parse { .. } => QdStatus::ParseError,
        Error::InvalidState { .. } | Error::NotHermitian { .. } | Error::NonFinite { .. } => QdStatus::InvalidState,
        Error::NotSquare { .. }
        | Error::DimensionMismatch { .. }
        | Error::AlphaOutOfRange(_)
        | Error::POutOfRange(_)
        | Error::InvalidRates(_)
        | Error::InvalidArgument(_) => QdStatus::InvalidArgument,
        Error::NoConvergence { .. } => QdStatus::NoConvergence,
        Error::AccuracyLoss(_) => QdStatus::AccuracyLoss,
        Error::NotUnitary { .. } | Error::DegenerateRates => QdStatus::NumericError,
    }
}

fn fail(status: QdStatus, msg: &str) -> QdStatus {
    set_last_error(msg);
    status
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), QdStatus>) -> QdStatus {
    set_last_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QdStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(QdStatus::Panic, "internal panic"),
    }
}

fn check<T>(r: qutrit_dsd::Result<T>) -> Result<T, QdStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), QdStatus> {
    if p.is_null() {
        Err(fail(QdStatus::NullPointer, &format!("{name} is null")))
    } else {
        Ok(())
    }
}

unsafe fn handle<'a>(h: *const QdDensityMatrix) -> Result<&'a DensityMatrix, QdStatus> {
    non_null(h, "handle")?;
    Ok(&(*h).inner)
}

unsafe fn store(out: *mut *mut QdDensityMatrix, rho: DensityMatrix) -> Result<(), QdStatus> {
    *out = Box::into_raw(Box::new(QdDensityMatrix { inner: rho }));
    Ok(())
}

fn params(gamma_ratio: f64) -> Result<DecayParams, QdStatus> {
    check(DecayParams::from_ratio(gamma_ratio))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn qd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Horodecki state for `alpha` in `[2, 5]`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qd_horodecki_state(alpha: f64, out: *mut *mut QdDensityMatrix) -> QdStatus {
    guard(|| {
        non_null(out, "out")?;
        store(out, check(horodecki_state(alpha))?)
    })
}

/// Locally rotated Horodecki state for `alpha` in `[2, 5]`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qd_horodecki_state_rotated(alpha: f64, out: *mut *mut QdDensityMatrix) -> QdStatus {
    guard(|| {
        non_null(out, "out")?;
        store(out, check(horodecki_state_rotated(alpha))?)
    })
}

/// Isotropic state for `p` in `[0, 1]`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qd_isotropic_state(p: f64, out: *mut *mut QdDensityMatrix) -> QdStatus {
    guard(|| {
        non_null(out, "out")?;
        store(out, check(isotropic_state(p))?)
    })
}

/// Validated state from row-major real and imaginary parts; `len` must be 81.
///
/// # Safety
/// `re` and `im` must point to `len` readable doubles; `out` must be valid
/// for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qd_density_matrix_from_parts(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut QdDensityMatrix,
) -> QdStatus {
    guard(|| {
        non_null(re, "re")?;
        non_null(im, "im")?;
        non_null(out, "out")?;
        if len != QD_MATRIX_LEN {
            return Err(fail(QdStatus::InvalidArgument, &format!("expected {QD_MATRIX_LEN} entries, got {len}")));
        }
        let (re, im) = (std::slice::from_raw_parts(re, len), std::slice::from_raw_parts(im, len));
        let data = re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect();
        let m = check(ComplexMatrix::new(DIM, DIM, data))?;
        store(out, check(DensityMatrix::new(m))?)
    })
}

/// Validated state from the text format (`dim 9` header, one row per line).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for a pointer
/// write.
#[no_mangle]
pub unsafe extern "C" fn qd_density_matrix_parse(text: *const c_char, out: *mut *mut QdDensityMatrix) -> QdStatus {
    guard(|| {
        non_null(text, "text")?;
        non_null(out, "out")?;
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| fail(QdStatus::ParseError, "input is not valid UTF-8"))?;
        store(out, check(parse_density_matrix(s))?)
    })
}

/// Copies the matrix into row-major `re`/`im` arrays of length `len` (81).
///
/// # Safety
/// `h` must be a live handle; `re` and `im` must point to `len` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn qd_density_matrix_get(
    h: *const QdDensityMatrix,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> QdStatus {
    guard(|| {
        let rho = handle(h)?;
        non_null(re, "re")?;
        non_null(im, "im")?;
        if len != QD_MATRIX_LEN {
            return Err(fail(QdStatus::InvalidArgument, &format!("expected {QD_MATRIX_LEN} entries, got {len}")));
        }
        for (k, z) in rho.as_matrix().data().iter().enumerate() {
            *re.add(k) = z.re;
            *im.add(k) = z.im;
        }
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qd_density_matrix_free(h: *mut QdDensityMatrix) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Closed-form evolution to time `gamma_e * t` with `gamma_u / gamma_e =
/// gamma_ratio`. Writes a new handle.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qd_propagate(
    h: *const QdDensityMatrix,
    t: f64,
    gamma_ratio: f64,
    out: *mut *mut QdDensityMatrix,
) -> QdStatus {
    guard(|| {
        let rho = handle(h)?;
        non_null(out, "out")?;
        let p = params(gamma_ratio)?;
        store(out, check(propagate_closed_form(rho, t, &p))?)
    })
}

/// # Safety
/// `h` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qd_negativity(h: *const QdDensityMatrix, tol: f64, out: *mut f64) -> QdStatus {
    guard(|| {
        let rho = handle(h)?;
        non_null(out, "out")?;
        *out = check(negativity(rho, tol))?;
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qd_ccnr_score(h: *const QdDensityMatrix, out: *mut f64) -> QdStatus {
    guard(|| {
        let rho = handle(h)?;
        non_null(out, "out")?;
        *out = check(ccnr_score(rho))?;
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qd_is_ppt(h: *const QdDensityMatrix, tol: f64, out: *mut bool) -> QdStatus {
    guard(|| {
        let rho = handle(h)?;
        non_null(out, "out")?;
        *out = check(is_ppt(rho, tol))?;
        Ok(())
    })
}

/// Classifies the trajectory starting from `h` up to `t_max`.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qd_classify(
    h: *const QdDensityMatrix,
    gamma_ratio: f64,
    t_max: f64,
    out: *mut QdDsdReport,
) -> QdStatus {
    guard(|| {
        let rho = handle(h)?;
        non_null(out, "out")?;
        let report = check(classify(rho, &params(gamma_ratio)?, t_max))?;
        let (start, end) = report.window.unwrap_or((f64::NAN, f64::NAN));
        ptr::write(
            out,
            QdDsdReport {
                has_t_n: report.t_n.is_some(),
                t_n: report.t_n.unwrap_or(f64::NAN),
                has_t_r: report.t_r.is_some(),
                t_r: report.t_r.unwrap_or(f64::NAN),
                has_window: report.window.is_some(),
                window_start: start,
                window_end: end,
                trajectory_type: match report.trajectory_type {
                    TrajectoryType::NptForever => QdTrajectoryType::NptForever,
                    TrajectoryType::EsdNoDsd => QdTrajectoryType::EsdNoDsd,
                    TrajectoryType::DsdThenUndetected => QdTrajectoryType::DsdThenUndetected,
                },
                entanglement_after_tn_unknown: report.entanglement_after_tn_unknown,
                initially_ppt: report.initially_ppt,
                non_monotone: report.non_monotone,
                horizon: report.horizon,
            },
        );
        Ok(())
    })
}
