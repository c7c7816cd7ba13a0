//! C ABI for `bellopt`.
//!
//! States and scans are opaque heap handles owned by the caller and released
//! with their `_free` function. Every fallible call returns a
//! [`BelloptStatus`]; on failure a message is kept per thread and can be read
//! with [`bellopt_last_error_message`]. Panics never cross the boundary.
//!
//! Density matrices are passed as 32 doubles: the 4×4 matrix row-major in the
//! basis `|11>, |10>, |01>, |00>`, each entry as `re, im`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bellopt::dynamics::uniform_grid;
use bellopt::{
    as_x_state, bell_function, brute_force_bmax, crossing_roots, ewl_state, horodecki_bmax,
    obp_set2, optimal_settings, time_scan, x_state_eigenvalues, x_to_dense, AngleSettings,
    DensityMatrix4, Error, EventKind, EwlParams, OracleConfig, QModel, Region, TimeScan, XState,
};
use num_complex::Complex64;

/// Default largest magnitude tolerated outside the X pattern.
pub const BELLOPT_DEFAULT_OFF_X_TOL: f64 = 1e-9;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BelloptStatus {
    Ok = 0,
    NullPointer = 1,
    NotHermitian = 2,
    TraceNotOne = 3,
    NotPositive = 4,
    NotXStructured = 5,
    InvalidArgument = 6,
    BudgetExceeded = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BelloptEventKind {
    SetJump = 0,
    ViolationOn = 1,
    ViolationOff = 2,
}

/// A validated two-qubit state.
pub struct BelloptState {
    rho: DensityMatrix4,
    x: Option<XState>,
}

/// The result of a time scan.
pub struct BelloptScan {
    scan: TimeScan,
}

/// Measurement angles in the order `(1, 1', 2, 2')`, radians.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BelloptAngles {
    /// 1 or 2.
    pub set: i32,
    pub tie: bool,
    pub theta: [f64; 4],
    pub phi: [f64; 4],
    /// Bell value these angles reach.
    pub bell: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BelloptOracleConfig {
    pub grid_n: usize,
    pub refine_iters: usize,
    pub restarts: usize,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BelloptRecord {
    pub t: f64,
    pub q2: f64,
    pub u: [f64; 3],
    pub bmax: f64,
    pub active_set: i32,
    pub theta: [f64; 4],
    pub phi: [f64; 4],
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BelloptEvent {
    pub kind: BelloptEventKind,
    pub t: f64,
    pub q2: f64,
    pub bmax: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(BelloptStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NotHermitian { .. } => BelloptStatus::NotHermitian,
            Error::TraceNotOne { .. } => BelloptStatus::TraceNotOne,
            Error::NotPositive { .. } => BelloptStatus::NotPositive,
            Error::NotXStructured { .. } => BelloptStatus::NotXStructured,
            Error::BudgetExceeded { .. } => BelloptStatus::BudgetExceeded,
            _ => BelloptStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(BelloptStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(BelloptStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BelloptStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            BelloptStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            BelloptStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn x_of(state: &BelloptState) -> Result<&XState, Failure> {
    state.x.as_ref().ok_or_else(|| {
        Failure(
            BelloptStatus::NotXStructured,
            "state is not X-structured within its tolerance".into(),
        )
    })
}

fn angles(x: &XState, s: &AngleSettings, tie: bool) -> BelloptAngles {
    BelloptAngles {
        set: match s.set_id {
            Region::Set1 => 1,
            Region::Set2 => 2,
        },
        tie,
        theta: s.theta,
        phi: s.phi,
        bell: bell_function(&x_to_dense(x), &s.to_bell_settings()),
    }
}

fn boxed_state(rho: DensityMatrix4, off_x_tol: f64) -> *mut BelloptState {
    let x = as_x_state(&rho, off_x_tol).ok();
    Box::into_raw(Box::new(BelloptState { rho, x }))
}

/// Validates a density matrix and returns a new state handle in `*out_state`.
///
/// `entries` holds the 4×4 matrix row-major in the basis
/// `|11>, |10>, |01>, |00>`, each entry as `re, im` (32 doubles). `off_x_tol` is the
/// largest magnitude accepted outside the X pattern; pass
/// `BELLOPT_DEFAULT_OFF_X_TOL` when unsure.
///
/// # Safety
/// `entries` must point at 32 readable doubles and `out_state` at a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn bellopt_state_new(
    entries: *const f64,
    off_x_tol: f64,
    out_state: *mut *mut BelloptState,
) -> BelloptStatus {
    guard(|| {
        if entries.is_null() {
            return Err(null("entries"));
        }
        let slot = out(out_state, "out_state")?;
        if !(off_x_tol >= 0.0) {
            return Err(invalid(format!("off_x_tol must be non-negative (got {off_x_tol})")));
        }
        let raw = std::slice::from_raw_parts(entries, 32);
        let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (k, pair) in raw.chunks_exact(2).enumerate() {
            m[k / 4][k % 4] = Complex64::new(pair[0], pair[1]);
        }
        *slot = boxed_state(DensityMatrix4::new(m)?, off_x_tol);
        Ok(())
    })
}

/// Extended Werner-like state `r|Φ><Φ| + (1-r)I/4`,
/// `|Φ> = α|01> + βe^{iδ}|10>`, with `alpha2 = α²`.
///
/// # Safety
/// `out_state` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn bellopt_state_ewl(
    alpha2: f64,
    r: f64,
    delta: f64,
    out_state: *mut *mut BelloptState,
) -> BelloptStatus {
    guard(|| {
        let slot = out(out_state, "out_state")?;
        let x = ewl_state(&EwlParams::new(alpha2, r, delta)?);
        *slot = Box::into_raw(Box::new(BelloptState { rho: x_to_dense(&x), x: Some(x) }));
        Ok(())
    })
}

/// Releases a state; null is ignored.
///
/// # Safety
/// `state` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bellopt_state_free(state: *mut BelloptState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn bellopt_state_is_x(state: *const BelloptState, out_is_x: *mut bool) -> BelloptStatus {
    guard(|| {
        let s = get(state, "state")?;
        *out(out_is_x, "out_is_x")? = s.x.is_some();
        Ok(())
    })
}

/// Maximum CHSH-Bell value: closed form for X states, Horodecki otherwise.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn bellopt_bmax(state: *const BelloptState, out_bmax: *mut f64) -> BelloptStatus {
    guard(|| {
        let s = get(state, "state")?;
        let slot = out(out_bmax, "out_bmax")?;
        *slot = match &s.x {
            Some(x) => x_state_eigenvalues(x).bmax(),
            None => horodecki_bmax(&s.rho),
        };
        Ok(())
    })
}

/// `u1, u2, u3` of an X state; `NOT_X_STRUCTURED` otherwise.
///
/// # Safety
/// `out_u` must point at 3 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn bellopt_eigenvalues(state: *const BelloptState, out_u: *mut f64) -> BelloptStatus {
    guard(|| {
        let x = x_of(get(state, "state")?)?;
        if out_u.is_null() {
            return Err(null("out_u"));
        }
        let u = x_state_eigenvalues(x);
        std::slice::from_raw_parts_mut(out_u, 3).copy_from_slice(&[u.u1, u.u2, u.u3]);
        Ok(())
    })
}

/// Optimal angles of an X state. On a tie the second set is written to
/// `out_alternate` when it is non-null; otherwise `out_alternate->set` is 0.
///
/// # Safety
/// Pointers must be valid; `out_alternate` may be null.
#[no_mangle]
pub unsafe extern "C" fn bellopt_optimal_angles(
    state: *const BelloptState,
    out_active: *mut BelloptAngles,
    out_alternate: *mut BelloptAngles,
) -> BelloptStatus {
    guard(|| {
        let x = x_of(get(state, "state")?)?;
        let active = out(out_active, "out_active")?;
        let (s, u) = optimal_settings(x);
        *active = angles(x, &s, u.tie);
        if let Some(alt) = out_alternate.as_mut() {
            *alt = if u.tie { angles(x, &obp_set2(x), true) } else { BelloptAngles::default() };
        }
        Ok(())
    })
}

/// Bell function by direct trace at the given angles, order `(1, 1', 2, 2')`.
///
/// # Safety
/// `theta` and `phi` must point at 4 readable doubles each.
#[no_mangle]
pub unsafe extern "C" fn bellopt_bell_function(
    state: *const BelloptState,
    theta: *const f64,
    phi: *const f64,
    out_value: *mut f64,
) -> BelloptStatus {
    guard(|| {
        let s = get(state, "state")?;
        if theta.is_null() || phi.is_null() {
            return Err(null("theta/phi"));
        }
        let slot = out(out_value, "out_value")?;
        let t: [f64; 4] = std::slice::from_raw_parts(theta, 4).try_into().expect("four angles");
        let p: [f64; 4] = std::slice::from_raw_parts(phi, 4).try_into().expect("four angles");
        if t.iter().chain(&p).any(|v| !v.is_finite()) {
            return Err(invalid("angles must be finite"));
        }
        *slot = bell_function(&s.rho, &AngleSettings::new(t, p, Region::Set1).to_bell_settings());
        Ok(())
    })
}

/// Default oracle configuration.
#[no_mangle]
pub extern "C" fn bellopt_oracle_config_default() -> BelloptOracleConfig {
    let c = OracleConfig::default();
    BelloptOracleConfig {
        grid_n: c.grid_n,
        refine_iters: c.refine_iters,
        restarts: c.restarts,
        seed: c.seed,
    }
}

/// Brute-force estimate of the maximum Bell value.
///
/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn bellopt_oracle(
    state: *const BelloptState,
    config: *const BelloptOracleConfig,
    out_bmax: *mut f64,
) -> BelloptStatus {
    guard(|| {
        let s = get(state, "state")?;
        let c = get(config, "config")?;
        let slot = out(out_bmax, "out_bmax")?;
        let cfg = OracleConfig {
            grid_n: c.grid_n,
            refine_iters: c.refine_iters,
            restarts: c.restarts,
            seed: c.seed,
        };
        *slot = brute_force_bmax(&s.rho, &cfg)?.bmax_est;
        Ok(())
    })
}

/// Values of `|q|²` where the extended Werner-like trajectory crosses
/// `u2 = u3`, ascending. Writes up to two roots and their count.
///
/// # Safety
/// `out_roots` must point at 2 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn bellopt_crossing_roots(
    alpha2: f64,
    r: f64,
    out_roots: *mut f64,
    out_count: *mut usize,
) -> BelloptStatus {
    guard(|| {
        if out_roots.is_null() {
            return Err(null("out_roots"));
        }
        let count = out(out_count, "out_count")?;
        let roots = crossing_roots(&EwlParams::new(alpha2, r, 0.0)?);
        let dst = std::slice::from_raw_parts_mut(out_roots, 2);
        dst.fill(f64::NAN);
        for (d, v) in dst.iter_mut().zip(&roots) {
            *d = *v;
        }
        *count = roots.len().min(2);
        Ok(())
    })
}

/// Evolves an X state under amplitude damping on `samples` equally spaced
/// times in `[0, t_max]`. `qmodel` is `exp:GAMMA`, `lorentz:LAMBDA,GAMMA0`
/// or `table:PATH`.
///
/// # Safety
/// `qmodel` must be a NUL-terminated string; pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn bellopt_scan_run(
    state: *const BelloptState,
    qmodel: *const c_char,
    t_max: f64,
    samples: usize,
    out_scan: *mut *mut BelloptScan,
) -> BelloptStatus {
    guard(|| {
        let x = x_of(get(state, "state")?)?;
        if qmodel.is_null() {
            return Err(null("qmodel"));
        }
        let slot = out(out_scan, "out_scan")?;
        let desc = CStr::from_ptr(qmodel).to_str().map_err(|_| invalid("qmodel is not UTF-8"))?;
        let model = QModel::parse_descriptor(desc)?;
        let scan = time_scan(x, &model, &uniform_grid(t_max, samples)?)?;
        *slot = Box::into_raw(Box::new(BelloptScan { scan }));
        Ok(())
    })
}

/// # Safety
/// `scan` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bellopt_scan_free(scan: *mut BelloptScan) {
    if !scan.is_null() {
        drop(Box::from_raw(scan));
    }
}

/// Number of time samples; 0 for null.
///
/// # Safety
/// `scan` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn bellopt_scan_len(scan: *const BelloptScan) -> usize {
    scan.as_ref().map_or(0, |s| s.scan.records.len())
}

/// Number of refined events; 0 for null.
///
/// # Safety
/// `scan` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn bellopt_scan_event_count(scan: *const BelloptScan) -> usize {
    scan.as_ref().map_or(0, |s| s.scan.events().count())
}

/// Number of grid warnings; 0 for null.
///
/// # Safety
/// `scan` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn bellopt_scan_warning_count(scan: *const BelloptScan) -> usize {
    scan.as_ref().map_or(0, |s| s.scan.warnings.len())
}

/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn bellopt_scan_record(
    scan: *const BelloptScan,
    index: usize,
    out_record: *mut BelloptRecord,
) -> BelloptStatus {
    guard(|| {
        let s = get(scan, "scan")?;
        let slot = out(out_record, "out_record")?;
        let r = s
            .scan
            .records
            .get(index)
            .ok_or_else(|| invalid(format!("record {index} out of range")))?;
        *slot = BelloptRecord {
            t: r.t,
            q2: r.q2,
            u: [r.u.u1, r.u.u2, r.u.u3],
            bmax: r.bmax,
            active_set: r.active_set.number() as i32,
            theta: r.settings.theta,
            phi: r.settings.phi,
        };
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn bellopt_scan_event(
    scan: *const BelloptScan,
    index: usize,
    out_event: *mut BelloptEvent,
) -> BelloptStatus {
    guard(|| {
        let s = get(scan, "scan")?;
        let slot = out(out_event, "out_event")?;
        let e = s
            .scan
            .events()
            .nth(index)
            .ok_or_else(|| invalid(format!("event {index} out of range")))?;
        *slot = BelloptEvent {
            kind: match e.kind {
                EventKind::SetJump => BelloptEventKind::SetJump,
                EventKind::ViolationOn => BelloptEventKind::ViolationOn,
                EventKind::ViolationOff => BelloptEventKind::ViolationOff,
            },
            t: e.t,
            q2: e.q2,
            bmax: e.bmax,
        };
        Ok(())
    })
}

/// Message for the last failed call on this thread, or an empty string.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn bellopt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, NUL-terminated, static.
#[no_mangle]
pub extern "C" fn bellopt_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;
    use bellopt::qstate::DEFAULT_OFF_X_TOL as CORE_OFF_X_TOL;
    use std::ptr;

    #[test]
    fn default_tolerance_matches_core() {
        assert_eq!(BELLOPT_DEFAULT_OFF_X_TOL, CORE_OFF_X_TOL);
    }

    #[test]
    fn panics_become_status() {
        assert_eq!(guard(|| panic!("boom")), BelloptStatus::Panic);
        let msg = unsafe { CStr::from_ptr(bellopt_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "panic: boom");
        assert_eq!(guard(|| Ok(())), BelloptStatus::Ok);
        assert!(unsafe { CStr::from_ptr(bellopt_last_error_message()) }.to_bytes().is_empty());
    }

    #[test]
    fn null_out_pointers_are_rejected() {
        assert_eq!(unsafe { bellopt_state_ewl(0.5, 1.0, 0.0, ptr::null_mut()) }, BelloptStatus::NullPointer);
    }
}
