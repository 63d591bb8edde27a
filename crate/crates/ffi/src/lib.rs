//! C ABI over `bpd-core`.
//!
//! Every entry point returns a [`BpdStatus`] and writes results through out
//! pointers. On failure the message is available from [`bpd_last_error`] on
//! the same thread. Handles are opaque and must be released with their
//! matching `_free` function. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bpd_core::sweeps::{ratio_map, Comparison, GridSpec, RatioMap};
use bpd_core::{
    classify_region, min_power, min_power_for_rates, nu_interval, power_of_nu, successive_rates,
    theorem2_bound, theorem3_limit, ChannelModel, Error, ProblemInstance, RatePair, SchemeKind,
    SolverOptions, SourceModel,
};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpdStatus {
    Ok = 0,
    InvalidParameter = 1,
    TrivialRegion = 2,
    NonTrivialRegion = 3,
    InfeasibleNu = 4,
    /// A root or denominator condition failed inside a numeric routine.
    Numeric = 5,
    Infeasible = 6,
    InvalidGrid = 7,
    OutOfRange = 8,
    NullPointer = 9,
    /// An internal panic was caught.
    Internal = 10,
}

/// Scheme selector, passed as an `int32_t`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpdScheme {
    Separate = 0,
    SchemeA = 1,
    SchemeB = 2,
    SchemeC = 3,
    OuterBound = 4,
}

/// Ratio-map comparison selector, passed as an `int32_t`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpdComparison {
    SepVsOuter = 0,
    CVsSep = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpdPowerSolution {
    pub power: f64,
    /// Optimal nu for separate coding; NaN when `has_optimizer` is false.
    pub optimizer: f64,
    pub has_optimizer: bool,
    pub eta_bar: f64,
    /// Trivial-region common-message-only figure.
    pub degenerate: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpdRatioCell {
    pub d1: f64,
    pub d2: f64,
    pub p_sep: f64,
    pub p_outer: f64,
    pub p_a: f64,
    pub p_b: f64,
    pub p_c: f64,
    pub ratio_db: f64,
    pub trivial: bool,
    pub low_distortion: bool,
    /// NaN in the trivial region.
    pub nu_opt: f64,
    pub eta_bar: f64,
}

/// Opaque problem instance: source, channel and target distortions.
pub struct BpdProblem {
    inst: ProblemInstance,
    opts: SolverOptions,
}

/// Opaque ratio map.
pub struct BpdRatioMap {
    map: RatioMap,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> BpdStatus {
    match err {
        Error::InvalidParameter { .. } => BpdStatus::InvalidParameter,
        Error::TrivialRegion => BpdStatus::TrivialRegion,
        Error::NonTrivialRegion => BpdStatus::NonTrivialRegion,
        Error::InfeasibleNu { .. } => BpdStatus::InfeasibleNu,
        Error::NonPositiveDenominator { .. } | Error::NoSignChange { .. } => BpdStatus::Numeric,
        Error::Infeasible(_) => BpdStatus::Infeasible,
        Error::InvalidGrid(_) => BpdStatus::InvalidGrid,
        Error::OutOfRange { .. } => BpdStatus::OutOfRange,
    }
}

fn fail(status: BpdStatus, msg: impl Into<String>) -> BpdStatus {
    set_last_error(msg.into());
    status
}

fn from_err(err: Error) -> BpdStatus {
    fail(status_of(&err), err.to_string())
}

/// Runs `f`, mapping panics to [`BpdStatus::Internal`].
fn guard(f: impl FnOnce() -> BpdStatus) -> BpdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(BpdStatus::Internal, "internal panic"),
    }
}

fn scheme_of(code: i32) -> Option<SchemeKind> {
    Some(match code {
        0 => SchemeKind::Separate,
        1 => SchemeKind::SchemeA,
        2 => SchemeKind::SchemeB,
        3 => SchemeKind::SchemeC,
        4 => SchemeKind::OuterBound,
        _ => return None,
    })
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(BpdStatus::NullPointer, concat!(stringify!($p), " is null"));
        })+
    };
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bpd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bpd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Validates the parameters and allocates a problem handle into `*out`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn bpd_problem_new(
    rho: f64,
    n1: f64,
    n2: f64,
    kappa: f64,
    d1: f64,
    d2: f64,
    out: *mut *mut BpdProblem,
) -> BpdStatus {
    non_null!(out);
    guard(|| match ProblemInstance::from_params(rho, n1, n2, kappa, d1, d2) {
        Ok(inst) => {
            let handle = Box::new(BpdProblem {
                inst,
                opts: SolverOptions::default(),
            });
            *out = Box::into_raw(handle);
            BpdStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            from_err(e)
        }
    })
}

/// Releases a handle from [`bpd_problem_new`]. Null is ignored.
///
/// # Safety
/// `p` must be null or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn bpd_problem_free(p: *mut BpdProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Writes the region flags of the instance's distortion pair.
///
/// # Safety
/// `p` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpd_problem_region(
    p: *const BpdProblem,
    trivial: *mut bool,
    low_distortion: *mut bool,
) -> BpdStatus {
    non_null!(p, trivial, low_distortion);
    guard(|| {
        let inst = &(*p).inst;
        let r = classify_region(&inst.source, &inst.d);
        *trivial = r.is_trivial();
        *low_distortion = r.low_distortion;
        BpdStatus::Ok
    })
}

/// Writes the admissible nu interval.
///
/// # Safety
/// `p` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpd_problem_nu_interval(
    p: *const BpdProblem,
    lo: *mut f64,
    hi: *mut f64,
) -> BpdStatus {
    non_null!(p, lo, hi);
    guard(|| {
        let inst = &(*p).inst;
        match nu_interval(&inst.source, &inst.d) {
            Ok(i) => {
                *lo = i.lo;
                *hi = i.hi;
                BpdStatus::Ok
            }
            Err(e) => from_err(e),
        }
    })
}

/// Minimum power of `scheme` (a [`BpdScheme`] value).
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpd_problem_min_power(
    p: *const BpdProblem,
    scheme: i32,
    out: *mut BpdPowerSolution,
) -> BpdStatus {
    non_null!(p, out);
    let Some(kind) = scheme_of(scheme) else {
        return fail(BpdStatus::InvalidParameter, format!("unknown scheme code {scheme}"));
    };
    guard(|| {
        let h = &*p;
        match min_power(&h.inst, kind, &h.opts) {
            Ok(s) => {
                *out = BpdPowerSolution {
                    power: s.power,
                    optimizer: s.optimizer.unwrap_or(f64::NAN),
                    has_optimizer: s.optimizer.is_some(),
                    eta_bar: s.eta_bar,
                    degenerate: s.degenerate,
                };
                BpdStatus::Ok
            }
            Err(e) => from_err(e),
        }
    })
}

/// Successive-coding rates (bits per source sample) at `nu`.
///
/// # Safety
/// `p` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpd_problem_successive_rates(
    p: *const BpdProblem,
    nu: f64,
    r1: *mut f64,
    r2: *mut f64,
) -> BpdStatus {
    non_null!(p, r1, r2);
    guard(|| {
        let inst = &(*p).inst;
        match successive_rates(&inst.source, &inst.d, nu) {
            Ok(r) => {
                *r1 = r.r1;
                *r2 = r.r2;
                BpdStatus::Ok
            }
            Err(e) => from_err(e),
        }
    })
}

/// Broadcast power and private fraction needed at `nu`.
///
/// # Safety
/// `p` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpd_problem_power_of_nu(
    p: *const BpdProblem,
    nu: f64,
    power: *mut f64,
    eta_bar: *mut f64,
) -> BpdStatus {
    non_null!(p, power, eta_bar);
    guard(|| {
        let inst = &(*p).inst;
        match power_of_nu(&inst.source, &inst.channel, &inst.d, nu) {
            Ok(s) => {
                *power = s.power;
                *eta_bar = s.eta_bar;
                BpdStatus::Ok
            }
            Err(e) => from_err(e),
        }
    })
}

/// Minimum broadcast power for the rate pair `(r1, r2)`.
///
/// # Safety
/// The out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpd_min_power_for_rates(
    n1: f64,
    n2: f64,
    kappa: f64,
    r1: f64,
    r2: f64,
    power: *mut f64,
    eta_bar: *mut f64,
) -> BpdStatus {
    non_null!(power, eta_bar);
    guard(|| {
        let ch = match ChannelModel::new(n1, n2, kappa) {
            Ok(c) => c,
            Err(e) => return from_err(e),
        };
        let rates = match RatePair::new(r1, r2) {
            Ok(r) => r,
            Err(e) => return from_err(e),
        };
        let s = min_power_for_rates(&ch, &rates);
        *power = s.power;
        *eta_bar = s.eta_bar;
        BpdStatus::Ok
    })
}

fn check_kappa(kappa: f64) -> Result<(), BpdStatus> {
    if kappa.is_finite() && kappa > 0.0 {
        Ok(())
    } else {
        Err(fail(BpdStatus::InvalidParameter, format!("kappa must be finite and positive, got {kappa}")))
    }
}

/// Upper bound on `P_sep / P_outer` over the low-distortion region.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpd_theorem2_bound(rho: f64, kappa: f64, out: *mut f64) -> BpdStatus {
    non_null!(out);
    guard(|| {
        if let Err(s) = check_kappa(kappa) {
            return s;
        }
        match SourceModel::new(rho) {
            Ok(s) => {
                *out = theorem2_bound(&s, kappa);
                BpdStatus::Ok
            }
            Err(e) => from_err(e),
        }
    })
}

/// Limit of `P_C / P_sep` as `D2 -> 0` at `D1 = 1 - rho^2`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpd_theorem3_limit(rho: f64, kappa: f64, out: *mut f64) -> BpdStatus {
    non_null!(out);
    guard(|| {
        if let Err(s) = check_kappa(kappa) {
            return s;
        }
        match SourceModel::new(rho) {
            Ok(s) => {
                *out = theorem3_limit(&s, kappa);
                BpdStatus::Ok
            }
            Err(e) => from_err(e),
        }
    })
}

/// Computes a power-ratio map over linear `d1 x d2` grids. `compare` is a
/// [`BpdComparison`] value; `workers == 0` uses every core.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpd_ratio_map_new(
    rho: f64,
    n1: f64,
    n2: f64,
    kappa: f64,
    d1_lo: f64,
    d1_hi: f64,
    d1_count: usize,
    d2_lo: f64,
    d2_hi: f64,
    d2_count: usize,
    compare: i32,
    workers: usize,
    out: *mut *mut BpdRatioMap,
) -> BpdStatus {
    non_null!(out);
    *out = ptr::null_mut();
    let comparison = match compare {
        0 => Comparison::SepVsOuter,
        1 => Comparison::CVsSep,
        _ => return fail(BpdStatus::InvalidParameter, format!("unknown comparison code {compare}")),
    };
    guard(|| {
        let built = (|| {
            let source = SourceModel::new(rho)?;
            let channel = ChannelModel::new(n1, n2, kappa)?;
            let g1 = GridSpec::linear(d1_lo, d1_hi, d1_count)?;
            let g2 = GridSpec::linear(d2_lo, d2_hi, d2_count)?;
            ratio_map(&source, &channel, &g1, &g2, comparison, &SolverOptions::default(), Some(workers))
        })();
        match built {
            Ok(map) => {
                *out = Box::into_raw(Box::new(BpdRatioMap { map }));
                BpdStatus::Ok
            }
            Err(e) => from_err(e),
        }
    })
}

/// Number of cells (row-major, `d1` outer).
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bpd_ratio_map_len(m: *const BpdRatioMap) -> usize {
    if m.is_null() {
        0
    } else {
        (*m).map.entries.len()
    }
}

/// Copies cell `index` into `out`. A cell whose evaluation failed returns
/// its error status and leaves `out` holding only `d1`, `d2` and NaNs.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bpd_ratio_map_cell(
    m: *const BpdRatioMap,
    index: usize,
    out: *mut BpdRatioCell,
) -> BpdStatus {
    non_null!(m, out);
    guard(|| {
        let map = &(*m).map;
        let Some(entry) = map.entries.get(index) else {
            return fail(BpdStatus::OutOfRange, format!("cell index {index} out of range"));
        };
        match &entry.cell {
            Ok(c) => {
                *out = BpdRatioCell {
                    d1: c.d1,
                    d2: c.d2,
                    p_sep: c.p_sep,
                    p_outer: c.p_outer,
                    p_a: c.p_a,
                    p_b: c.p_b,
                    p_c: c.p_c,
                    ratio_db: c.ratio_db,
                    trivial: c.region.is_trivial(),
                    low_distortion: c.region.low_distortion,
                    nu_opt: c.nu_opt.unwrap_or(f64::NAN),
                    eta_bar: c.eta_bar,
                };
                BpdStatus::Ok
            }
            Err(e) => {
                let nan = f64::NAN;
                *out = BpdRatioCell {
                    d1: entry.d1,
                    d2: entry.d2,
                    p_sep: nan,
                    p_outer: nan,
                    p_a: nan,
                    p_b: nan,
                    p_c: nan,
                    ratio_db: nan,
                    trivial: false,
                    low_distortion: false,
                    nu_opt: nan,
                    eta_bar: nan,
                };
                from_err(e.clone())
            }
        }
    })
}

/// Releases a map from [`bpd_ratio_map_new`]. Null is ignored.
///
/// # Safety
/// `m` must be null or a live handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn bpd_ratio_map_free(m: *mut BpdRatioMap) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}
