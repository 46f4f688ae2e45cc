//! C ABI over `cdss-core`.
//!
//! Systems and curve sets are opaque heap handles released with their
//! `*_free` function. Exact rationals cross the boundary as NUL-terminated
//! `"p/q"` strings (decimals such as `"0.25"` are accepted on input); strings
//! returned through `out` parameters belong to the caller and are released
//! with [`cdss_string_free`]. Every call returns a [`CdssStatus`]; on failure
//! [`cdss_last_error_message`] describes the error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cdss::bisect::BisectionOptions;
use cdss::capacity::capacity;
use cdss::flowgraph::brute_force_capacity;
use cdss::rational::{parse_rational, to_display_decimal, to_fraction};
use cdss::tradeoff::{
    capacity_of_kappa, curves_to_json, gamma_i_star, min_gamma_c, sweep, zero_cross_threshold, CurveKind, FileSize,
    SweepParams, TradeoffCurve,
};
use cdss::{Error, Rational, ResourceAllocation, SystemConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdssStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidConfig = 4,
    InvalidResource = 5,
    Inconsistent = 6,
    BudgetExceeded = 7,
    Disconnected = 8,
    AlphaTooSmall = 9,
    DegenerateCluster = 10,
    Infeasible = 11,
    KappaOutOfRange = 12,
    InvalidGrid = 13,
    InvalidParameter = 14,
    IndexOutOfRange = 15,
    Panic = 16,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdssCurveKind {
    Kappa = 0,
    AlphaGamma = 1,
    GammaIGammaC = 2,
}

/// Opaque clustered system shape.
pub struct CdssConfig {
    inner: SystemConfig,
}

/// Opaque result of a sweep: one or more curves.
pub struct CdssCurveSet {
    curves: Vec<TradeoffCurve>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> CdssStatus {
    match err {
        Error::NonDividing { .. } | Error::InvalidK { .. } | Error::InvalidN(_) | Error::InvalidClusterCount => {
            CdssStatus::InvalidConfig
        }
        Error::NegativeResource { .. } | Error::AssumptionViolated { .. } | Error::InvalidFileSize(_) => {
            CdssStatus::InvalidResource
        }
        Error::InvalidSelection(_) | Error::InvalidOrdering(_) | Error::InconsistentArguments(_) => {
            CdssStatus::Inconsistent
        }
        Error::Disconnected => CdssStatus::Disconnected,
        Error::BudgetExceeded { .. } => CdssStatus::BudgetExceeded,
        Error::KappaOutOfRange(_) => CdssStatus::KappaOutOfRange,
        Error::AlphaTooSmall { .. } => CdssStatus::AlphaTooSmall,
        Error::DegenerateCluster(_) => CdssStatus::DegenerateCluster,
        Error::Infeasible(_) => CdssStatus::Infeasible,
        Error::InvalidGrid(_) => CdssStatus::InvalidGrid,
        Error::InvalidParameter(_) => CdssStatus::InvalidParameter,
        Error::Parse(_) => CdssStatus::Parse,
    }
}

struct Failure(CdssStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CdssStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CdssStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            CdssStatus::Panic
        }
    }
}

unsafe fn rational_arg(ptr: *const c_char, name: &str) -> Result<Rational, Failure> {
    if ptr.is_null() {
        return Err(Failure(CdssStatus::NullPointer, format!("{name} is null")));
    }
    let text =
        CStr::from_ptr(ptr).to_str().map_err(|_| Failure(CdssStatus::InvalidUtf8, format!("{name} is not UTF-8")))?;
    Ok(parse_rational(text)?)
}

unsafe fn optional_rational(ptr: *const c_char, name: &str) -> Result<Option<Rational>, Failure> {
    if ptr.is_null() {
        Ok(None)
    } else {
        rational_arg(ptr, name).map(Some)
    }
}

unsafe fn config_arg<'a>(cfg: *const CdssConfig) -> Result<&'a SystemConfig, Failure> {
    cfg.as_ref().map(|c| &c.inner).ok_or_else(|| Failure(CdssStatus::NullPointer, "config handle is null".into()))
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(CdssStatus::NullPointer, "output pointer is null".into()));
    }
    *out = CString::new(text).expect("no interior NUL").into_raw();
    Ok(())
}

unsafe fn write_rational(out: *mut *mut c_char, value: &Rational) -> Result<(), Failure> {
    write_string(out, to_fraction(value))
}

/// Message for the most recent failed call on this thread, or NULL. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cdss_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cdss_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn cdss_config_new(n: usize, k: usize, clusters: usize, out: *mut *mut CdssConfig) -> CdssStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(CdssStatus::NullPointer, "output pointer is null".into()));
        }
        let inner = SystemConfig::new(n, k, clusters)?;
        *out = Box::into_raw(Box::new(CdssConfig { inner }));
        Ok(())
    })
}

/// # Safety
/// `cfg` must be NULL or a handle from [`cdss_config_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cdss_config_free(cfg: *mut CdssConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Nodes per cluster; 0 for a NULL handle.
///
/// # Safety
/// `cfg` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cdss_config_cluster_size(cfg: *const CdssConfig) -> usize {
    cfg.as_ref().map_or(0, |c| c.inner.cluster_size())
}

/// # Safety
/// `cfg` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cdss_config_intra_helpers(cfg: *const CdssConfig) -> usize {
    cfg.as_ref().map_or(0, |c| c.inner.intra_helpers())
}

/// # Safety
/// `cfg` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cdss_config_cross_helpers(cfg: *const CdssConfig) -> usize {
    cfg.as_ref().map_or(0, |c| c.inner.cross_helpers())
}

unsafe fn resources(
    cfg: &SystemConfig,
    alpha: *const c_char,
    beta_i: *const c_char,
    beta_c: *const c_char,
) -> Result<ResourceAllocation, Failure> {
    Ok(ResourceAllocation::new(
        cfg,
        rational_arg(alpha, "alpha")?,
        rational_arg(beta_i, "beta_i")?,
        rational_arg(beta_c, "beta_c")?,
    )?)
}

/// Closed-form capacity.
///
/// # Safety
/// Pointers must be valid: a live config handle, NUL-terminated inputs and a
/// writable `out`.
#[no_mangle]
pub unsafe extern "C" fn cdss_capacity(
    cfg: *const CdssConfig,
    alpha: *const c_char,
    beta_i: *const c_char,
    beta_c: *const c_char,
    out: *mut *mut c_char,
) -> CdssStatus {
    guard(|| {
        let cfg = config_arg(cfg)?;
        let res = resources(cfg, alpha, beta_i, beta_c)?;
        write_rational(out, &capacity(cfg, &res)?)
    })
}

/// Capacity by max-flow over every candidate graph; fails with
/// `BUDGET_EXCEEDED` when more than `budget` graphs would be needed.
///
/// # Safety
/// As for [`cdss_capacity`].
#[no_mangle]
pub unsafe extern "C" fn cdss_brute_force_capacity(
    cfg: *const CdssConfig,
    alpha: *const c_char,
    beta_i: *const c_char,
    beta_c: *const c_char,
    budget: u64,
    out: *mut *mut c_char,
) -> CdssStatus {
    guard(|| {
        let cfg = config_arg(cfg)?;
        let res = resources(cfg, alpha, beta_i, beta_c)?;
        write_rational(out, &brute_force_capacity(cfg, &res, budget as u128)?)
    })
}

/// # Safety
/// As for [`cdss_capacity`].
#[no_mangle]
pub unsafe extern "C" fn cdss_capacity_of_kappa(
    cfg: *const CdssConfig,
    alpha: *const c_char,
    gamma: *const c_char,
    kappa: *const c_char,
    out: *mut *mut c_char,
) -> CdssStatus {
    guard(|| {
        let cfg = config_arg(cfg)?;
        let value = capacity_of_kappa(
            cfg,
            &rational_arg(alpha, "alpha")?,
            &rational_arg(gamma, "gamma")?,
            &rational_arg(kappa, "kappa")?,
        )?;
        write_rational(out, &value)
    })
}

/// Closed-form zero-cross-traffic threshold; `DEGENERATE_CLUSTER` for
/// clusters of two or fewer nodes.
///
/// # Safety
/// As for [`cdss_capacity`].
#[no_mangle]
pub unsafe extern "C" fn cdss_gamma_i_star(
    cfg: *const CdssConfig,
    file_size: *const c_char,
    alpha: *const c_char,
    out: *mut *mut c_char,
) -> CdssStatus {
    guard(|| {
        let cfg = config_arg(cfg)?;
        let m = FileSize::new(rational_arg(file_size, "file_size")?)?;
        write_rational(out, &gamma_i_star(cfg, &m, &rational_arg(alpha, "alpha")?)?)
    })
}

/// Zero-cross-traffic threshold for any cluster size (bisection fallback).
///
/// # Safety
/// As for [`cdss_capacity`].
#[no_mangle]
pub unsafe extern "C" fn cdss_zero_cross_threshold(
    cfg: *const CdssConfig,
    file_size: *const c_char,
    alpha: *const c_char,
    out: *mut *mut c_char,
) -> CdssStatus {
    guard(|| {
        let cfg = config_arg(cfg)?;
        let m = FileSize::new(rational_arg(file_size, "file_size")?)?;
        let value = zero_cross_threshold(cfg, &m, &rational_arg(alpha, "alpha")?, &BisectionOptions::default())?;
        write_rational(out, &value)
    })
}

/// Smallest cross-cluster bandwidth storing `file_size`.
///
/// # Safety
/// As for [`cdss_capacity`].
#[no_mangle]
pub unsafe extern "C" fn cdss_min_gamma_c(
    cfg: *const CdssConfig,
    file_size: *const c_char,
    alpha: *const c_char,
    gamma_i: *const c_char,
    out: *mut *mut c_char,
) -> CdssStatus {
    guard(|| {
        let cfg = config_arg(cfg)?;
        let m = FileSize::new(rational_arg(file_size, "file_size")?)?;
        let t = min_gamma_c(
            cfg,
            &m,
            &rational_arg(alpha, "alpha")?,
            &rational_arg(gamma_i, "gamma_i")?,
            &BisectionOptions::default(),
        )?;
        write_rational(out, &t.value)
    })
}

/// Renders a rational string as a decimal with twelve significant digits.
///
/// # Safety
/// `value` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cdss_to_decimal(value: *const c_char, out: *mut *mut c_char) -> CdssStatus {
    guard(|| write_string(out, to_display_decimal(&rational_arg(value, "value")?)))
}

/// Evaluates a trade-off curve family. `file_size`, `alpha` and `gamma` may
/// be NULL when the kind does not need them; `grid` holds `grid_len`
/// strictly increasing values.
///
/// # Safety
/// `grid` must point to `grid_len` valid strings; other pointers as for
/// [`cdss_capacity`].
#[no_mangle]
pub unsafe extern "C" fn cdss_sweep(
    cfg: *const CdssConfig,
    kind: CdssCurveKind,
    file_size: *const c_char,
    alpha: *const c_char,
    gamma: *const c_char,
    grid: *const *const c_char,
    grid_len: usize,
    out: *mut *mut CdssCurveSet,
) -> CdssStatus {
    guard(|| {
        let cfg = config_arg(cfg)?;
        if out.is_null() || (grid.is_null() && grid_len > 0) {
            return Err(Failure(CdssStatus::NullPointer, "grid or output pointer is null".into()));
        }
        let kind = match kind {
            CdssCurveKind::Kappa => CurveKind::Kappa,
            CdssCurveKind::AlphaGamma => CurveKind::AlphaGamma,
            CdssCurveKind::GammaIGammaC => CurveKind::GammaIGammaC,
        };
        let params = SweepParams {
            file_size: optional_rational(file_size, "file_size")?.map(FileSize::new).transpose()?,
            alpha: optional_rational(alpha, "alpha")?,
            gamma: optional_rational(gamma, "gamma")?,
            bisection: BisectionOptions::default(),
        };
        let values = if grid_len == 0 { &[][..] } else { std::slice::from_raw_parts(grid, grid_len) };
        let points = values.iter().map(|&p| rational_arg(p, "grid value")).collect::<Result<Vec<_>, _>>()?;
        let curves = sweep(kind, cfg, &params, &points)?;
        *out = Box::into_raw(Box::new(CdssCurveSet { curves }));
        Ok(())
    })
}

/// Number of curves in the set; 0 for NULL.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cdss_curve_set_len(set: *const CdssCurveSet) -> usize {
    set.as_ref().map_or(0, |s| s.curves.len())
}

/// CSV text of curve `index`.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cdss_curve_set_csv(
    set: *const CdssCurveSet,
    index: usize,
    out: *mut *mut c_char,
) -> CdssStatus {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| Failure(CdssStatus::NullPointer, "curve set handle is null".into()))?;
        let curve =
            set.curves.get(index).ok_or_else(|| Failure(CdssStatus::IndexOutOfRange, format!("no curve {index}")))?;
        write_string(out, curve.to_csv())
    })
}

/// JSON sidecar with exact values for every curve in the set.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cdss_curve_set_json(set: *const CdssCurveSet, out: *mut *mut c_char) -> CdssStatus {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| Failure(CdssStatus::NullPointer, "curve set handle is null".into()))?;
        write_string(out, curves_to_json(&set.curves))
    })
}

/// # Safety
/// `set` must be NULL or a handle from [`cdss_sweep`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cdss_curve_set_free(set: *mut CdssCurveSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}
