//! C ABI over `epspect`.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free`. Every fallible call returns an [`EpsStatus`]; on failure
//! a message is kept per thread and read back with [`eps_last_error`].
//! Strings handed out by the library are freed with [`eps_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use epspect::eploc::{self, EpCertificate};
use epspect::lattice::{self, build_hamiltonian, ModelParams, RobinData};
use epspect::metric::{self, MetricSolution};
use epspect::secular;
use num_complex::Complex64;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BufferTooSmall = 3,
    Computation = 4,
    Panic = 5,
}

/// One lattice model.
pub struct EpsModel {
    params: ModelParams,
}

/// Certified exceptional points of one chain length.
pub struct EpsEpList {
    certs: Vec<EpCertificate>,
}

/// Solution of the metric equation for one model.
pub struct EpsMetric {
    solution: MetricSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> Result<(), (EpsStatus, String)>) -> EpsStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EpsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            EpsStatus::Panic
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> (EpsStatus, String) {
    (EpsStatus::InvalidArgument, e.to_string())
}

fn failed(e: impl std::fmt::Display) -> (EpsStatus, String) {
    (EpsStatus::Computation, e.to_string())
}

fn null(what: &str) -> (EpsStatus, String) {
    (EpsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (EpsStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_slot<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (EpsStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Writes complex values into two caller arrays of length `len`.
unsafe fn write_complex(
    values: &[Complex64],
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> Result<(), (EpsStatus, String)> {
    if re.is_null() || im.is_null() {
        return Err(null("output buffer"));
    }
    if len < values.len() {
        return Err((EpsStatus::BufferTooSmall, format!("need {} entries, got {len}", values.len())));
    }
    let re = std::slice::from_raw_parts_mut(re, values.len());
    let im = std::slice::from_raw_parts_mut(im, values.len());
    for (k, z) in values.iter().enumerate() {
        re[k] = z.re;
        im[k] = z.im;
    }
    Ok(())
}

fn into_c_string(s: String) -> Result<*mut c_char, (EpsStatus, String)> {
    CString::new(s).map(CString::into_raw).map_err(failed)
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn eps_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn eps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Model with shift `u` and non-Hermiticity `r` (shifted convention).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eps_model_new_shift(n: usize, u: f64, r: f64, out: *mut *mut EpsModel) -> EpsStatus {
    guard(|| {
        let slot = out_slot(out, "out")?;
        let params = ModelParams::with_shift(n, u, r).map_err(invalid)?;
        *slot = Box::into_raw(Box::new(EpsModel { params }));
        Ok(())
    })
}

/// Model with complex corner parameter `z` (shifted convention).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eps_model_new_z(n: usize, z_re: f64, z_im: f64, out: *mut *mut EpsModel) -> EpsStatus {
    guard(|| {
        let slot = out_slot(out, "out")?;
        let params = ModelParams::with_z(n, Complex64::new(z_re, z_im)).map_err(invalid)?;
        *slot = Box::into_raw(Box::new(EpsModel { params }));
        Ok(())
    })
}

/// Model from a `ModelParams` JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eps_model_from_json(json: *const c_char, out: *mut *mut EpsModel) -> EpsStatus {
    guard(|| {
        let slot = out_slot(out, "out")?;
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(invalid)?;
        let params: ModelParams = serde_json::from_str(text).map_err(invalid)?;
        *slot = Box::into_raw(Box::new(EpsModel { params }));
        Ok(())
    })
}

/// # Safety
/// `m` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn eps_model_free(m: *mut EpsModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Matrix dimension, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn eps_model_dim(m: *const EpsModel) -> usize {
    m.as_ref().map_or(0, |m| m.params.n)
}

/// Eigenvalues sorted by real then imaginary part into `re`, `im` (each of
/// length at least the dimension).
///
/// # Safety
/// `m` must be a live handle and the buffers valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn eps_model_spectrum(m: *const EpsModel, re: *mut f64, im: *mut f64, len: usize) -> EpsStatus {
    guard(|| {
        let m = deref(m, "model")?;
        let ev = secular::spectrum(&m.params).map_err(failed)?;
        write_complex(&ev, re, im, len)
    })
}

/// Hamiltonian in row-major order (`len` at least dimension squared).
///
/// # Safety
/// `m` must be a live handle and the buffers valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn eps_model_matrix(m: *const EpsModel, re: *mut f64, im: *mut f64, len: usize) -> EpsStatus {
    guard(|| {
        let m = deref(m, "model")?;
        let h = build_hamiltonian(&m.params);
        let n = m.params.n;
        let rows: Vec<Complex64> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| h[(i, j)]).collect();
        write_complex(&rows, re, im, len)
    })
}

/// Exceptional points of the `n`-site chain on the `r = 0` slice.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eps_locate_eps(n: usize, out: *mut *mut EpsEpList) -> EpsStatus {
    guard(|| {
        let slot = out_slot(out, "out")?;
        let certs = eploc::locate_eps(n).map_err(|e| match e {
            eploc::EpError::Dimension(_) => invalid(e),
            _ => failed(e),
        })?;
        *slot = Box::into_raw(Box::new(EpsEpList { certs }));
        Ok(())
    })
}

/// # Safety
/// `l` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn eps_ep_list_len(l: *const EpsEpList) -> usize {
    l.as_ref().map_or(0, |l| l.certs.len())
}

/// Shift, eigenvalue and relative Jordan residual of entry `i`.
///
/// # Safety
/// `l` must be a live handle; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn eps_ep_list_get(
    l: *const EpsEpList,
    i: usize,
    u: *mut f64,
    e_re: *mut f64,
    e_im: *mut f64,
    residual: *mut f64,
) -> EpsStatus {
    guard(|| {
        let l = deref(l, "list")?;
        let c = l.certs.get(i).ok_or_else(|| invalid(format!("index {i} out of range")))?;
        *out_slot(u, "u")? = c.u();
        *out_slot(e_re, "e_re")? = c.e().re;
        *out_slot(e_im, "e_im")? = c.e().im;
        *out_slot(residual, "residual")? = c.jordan.relative_residual;
        Ok(())
    })
}

/// All certificates as a JSON array; free with [`eps_string_free`].
///
/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eps_ep_list_json(l: *const EpsEpList, out: *mut *mut c_char) -> EpsStatus {
    guard(|| {
        let l = deref(l, "list")?;
        let slot = out_slot(out, "out")?;
        let v: Vec<serde_json::Value> = l.certs.iter().map(EpCertificate::to_json).collect();
        *slot = into_c_string(serde_json::Value::Array(v).to_string())?;
        Ok(())
    })
}

/// # Safety
/// `l` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn eps_ep_list_free(l: *mut EpsEpList) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// Positive-definite metric for the model; fails with
/// `EPS_STATUS_COMPUTATION` outside the reality domain.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eps_metric_solve(m: *const EpsModel, out: *mut *mut EpsMetric) -> EpsStatus {
    guard(|| {
        let m = deref(m, "model")?;
        let slot = out_slot(out, "out")?;
        let solution = metric::solve_dieudonne(&build_hamiltonian(&m.params)).map_err(failed)?;
        *slot = Box::into_raw(Box::new(EpsMetric { solution }));
        Ok(())
    })
}

/// Dimension of the Hermitian solution space.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn eps_metric_basis_dim(t: *const EpsMetric) -> usize {
    t.as_ref().map_or(0, |t| t.solution.basis.len())
}

/// Representative metric in row-major order.
///
/// # Safety
/// `t` must be a live handle and the buffers valid for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn eps_metric_representative(
    t: *const EpsMetric,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> EpsStatus {
    guard(|| {
        let t = deref(t, "metric")?;
        let th = &t.solution.representative;
        let n = th.nrows();
        let rows: Vec<Complex64> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| th[(i, j)]).collect();
        write_complex(&rows, re, im, len)
    })
}

/// Metric solution as JSON; free with [`eps_string_free`].
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eps_metric_json(t: *const EpsMetric, out: *mut *mut c_char) -> EpsStatus {
    guard(|| {
        let t = deref(t, "metric")?;
        let slot = out_slot(out, "out")?;
        *slot = into_c_string(t.solution.to_json().to_string())?;
        Ok(())
    })
}

/// # Safety
/// `t` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn eps_metric_free(t: *mut EpsMetric) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Corner parameter `z` of the discretized Robin condition.
///
/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn eps_robin_to_z(alpha: f64, beta: f64, h: f64, z_re: *mut f64, z_im: *mut f64) -> EpsStatus {
    guard(|| {
        let z = lattice::robin_to_z(&RobinData { alpha, beta, h }).map_err(invalid)?;
        *out_slot(z_re, "z_re")? = z.re;
        *out_slot(z_im, "z_im")? = z.im;
        Ok(())
    })
}
