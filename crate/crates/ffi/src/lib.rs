//! C ABI over `bathcool`.
//!
//! Every fallible function returns a [`BcStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and can
//! be read with [`bc_last_error`]. Trajectories are returned as opaque
//! [`BcTrajectory`] handles that must be released with
//! [`bc_trajectory_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bathcool::analytic::{
    evaluate_law, half_thermalization_time, time_to_value, CoolingParams, LawKind,
};
use bathcool::correlators::{wick_four_point, LadderOp};
use bathcool::ladder::{evolve_populations, PopulationVector};
use bathcool::lindblad::{integrate, FockDensityMatrix, IntegratorConfig, RateLaw, RateModel};
use bathcool::scales::{occupation_from_temperature, temperature_from_occupation};
use bathcool::{Error, Occupation, PhysicalScales, Temperature, Trajectory};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Truncation = 3,
    Integration = 4,
    BufferTooSmall = 5,
    InvalidEnum = 6,
    Panic = 7,
}

/// Closed-form cooling laws.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcLaw {
    Newton = 0,
    Markov = 1,
    Modified = 2,
}

/// Time dependence of the master-equation rates.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcRateLaw {
    ConstantMarkov = 0,
    Feedback = 1,
    Ramped = 2,
}

/// Opaque trajectory handle.
pub struct BcTrajectory {
    inner: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: BcStatus, msg: impl Into<String>) -> BcStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> BcStatus {
    let status = match e {
        Error::Domain(_) => BcStatus::Domain,
        Error::Truncation(_) => BcStatus::Truncation,
        Error::Integration { .. } => BcStatus::Integration,
    };
    fail(status, e.to_string())
}

/// Run `f`, translating errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), BcStatus>>(f: F) -> BcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BcStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(BcStatus::Panic, "internal panic"),
    }
}

fn write<T>(out: *mut T, value: T) -> Result<(), BcStatus> {
    if out.is_null() {
        return Err(fail(BcStatus::NullPointer, "output pointer is null"));
    }
    // SAFETY: non-null, and the caller guarantees it points to writable storage.
    unsafe { out.write(value) };
    Ok(())
}

fn law_kind(law: u32) -> Result<LawKind, BcStatus> {
    match law {
        0 => Ok(LawKind::Newton),
        1 => Ok(LawKind::Markov),
        2 => Ok(LawKind::Modified),
        _ => Err(fail(BcStatus::InvalidEnum, format!("unknown law {law}"))),
    }
}

fn rate_law(law: u32) -> Result<RateLaw, BcStatus> {
    match law {
        0 => Ok(RateLaw::ConstantMarkov),
        1 => Ok(RateLaw::Feedback),
        2 => Ok(RateLaw::Ramped),
        _ => Err(fail(
            BcStatus::InvalidEnum,
            format!("unknown rate law {law}"),
        )),
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Mean occupation `1 / (exp(theta0 / t) - 1)`.
#[no_mangle]
pub extern "C" fn bc_occupation_from_temperature(t: f64, theta0: f64, out: *mut f64) -> BcStatus {
    guard(|| {
        let scales = PhysicalScales::new(theta0, 1.0).map_err(from_error)?;
        let temp = Temperature::new(t).map_err(from_error)?;
        let n = occupation_from_temperature(temp, &scales).map_err(from_error)?;
        write(out, n.value())
    })
}

/// Temperature `theta0 / ln(1 + 1 / n)`.
#[no_mangle]
pub extern "C" fn bc_temperature_from_occupation(n: f64, theta0: f64, out: *mut f64) -> BcStatus {
    guard(|| {
        let scales = PhysicalScales::new(theta0, 1.0).map_err(from_error)?;
        let occ = Occupation::new(n).map_err(from_error)?;
        let t = temperature_from_occupation(occ, &scales).map_err(from_error)?;
        write(out, t.value())
    })
}

/// Value of a closed-form law at time `t`. `law` is a [`BcLaw`].
#[no_mangle]
pub extern "C" fn bc_evaluate_law(
    law: u32,
    x0: f64,
    x_r: f64,
    gamma: f64,
    t: f64,
    out: *mut f64,
) -> BcStatus {
    guard(|| {
        let kind = law_kind(law)?;
        let p = CoolingParams::new(x0, x_r, gamma).map_err(from_error)?;
        write(out, evaluate_law(kind, &p, t).map_err(from_error)?)
    })
}

/// Time at which half of the initial excess has relaxed.
#[no_mangle]
pub extern "C" fn bc_half_time(law: u32, gamma: f64, out: *mut f64) -> BcStatus {
    guard(|| {
        let kind = law_kind(law)?;
        write(
            out,
            half_thermalization_time(kind, gamma).map_err(from_error)?,
        )
    })
}

/// Time at which the law reaches `target`, strictly between `x0` and `x_r`.
#[no_mangle]
pub extern "C" fn bc_time_to_value(
    law: u32,
    x0: f64,
    x_r: f64,
    gamma: f64,
    target: f64,
    out: *mut f64,
) -> BcStatus {
    guard(|| {
        let kind = law_kind(law)?;
        let p = CoolingParams::new(x0, x_r, gamma).map_err(from_error)?;
        write(out, time_to_value(kind, &p, target).map_err(from_error)?)
    })
}

/// Thermal four-point function of ladder operators. `ops` holds four entries,
/// `0` for the lowering and `1` for the raising operator, leftmost first.
///
/// # Safety
///
/// `ops` must point to four readable bytes; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bc_wick_four_point(
    ops: *const u8,
    n_bar: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> BcStatus {
    guard(|| {
        if ops.is_null() {
            return Err(fail(BcStatus::NullPointer, "ops is null"));
        }
        // SAFETY: the caller provides four readable bytes.
        let raw = unsafe { std::slice::from_raw_parts(ops, 4) };
        let mut parsed = [LadderOp::Lower; 4];
        for (slot, &b) in parsed.iter_mut().zip(raw) {
            *slot = match b {
                0 => LadderOp::Lower,
                1 => LadderOp::Raise,
                _ => return Err(fail(BcStatus::InvalidEnum, format!("unknown operator {b}"))),
            };
        }
        let n = Occupation::new(n_bar).map_err(from_error)?;
        let v = wick_four_point(parsed, n);
        write(out_re, v.re)?;
        write(out_im, v.im)
    })
}

fn model_and_config(
    law: u32,
    gamma: f64,
    n_bar_r: f64,
    dt: f64,
    t_end: f64,
) -> Result<(RateModel, IntegratorConfig), BcStatus> {
    let model = RateModel::new(rate_law(law)?, gamma, n_bar_r).map_err(from_error)?;
    let cfg = IntegratorConfig::new(dt, t_end).map_err(from_error)?;
    Ok((model, cfg))
}

fn hand_out(traj: Trajectory, out: *mut *mut BcTrajectory) -> Result<(), BcStatus> {
    if out.is_null() {
        return Err(fail(BcStatus::NullPointer, "output pointer is null"));
    }
    let handle = Box::into_raw(Box::new(BcTrajectory { inner: traj }));
    // SAFETY: checked non-null above.
    unsafe { out.write(handle) };
    Ok(())
}

/// Integrate the master equation from the number state `level` on `dim`
/// levels. `law` is a [`BcRateLaw`]. On success `*out` owns a new handle.
#[no_mangle]
pub extern "C" fn bc_integrate_number_state(
    law: u32,
    gamma: f64,
    n_bar_r: f64,
    level: usize,
    dim: usize,
    dt: f64,
    t_end: f64,
    out: *mut *mut BcTrajectory,
) -> BcStatus {
    guard(|| {
        let (model, cfg) = model_and_config(law, gamma, n_bar_r, dt, t_end)?;
        let rho0 = FockDensityMatrix::number_state(level, dim).map_err(from_error)?;
        hand_out(integrate(&rho0, &model, &cfg).map_err(from_error)?, out)
    })
}

/// Integrate the master equation from a thermal state with mean `n_bar_s0`.
#[no_mangle]
pub extern "C" fn bc_integrate_thermal_state(
    law: u32,
    gamma: f64,
    n_bar_r: f64,
    n_bar_s0: f64,
    dim: usize,
    dt: f64,
    t_end: f64,
    out: *mut *mut BcTrajectory,
) -> BcStatus {
    guard(|| {
        let (model, cfg) = model_and_config(law, gamma, n_bar_r, dt, t_end)?;
        let n0 = Occupation::new(n_bar_s0).map_err(from_error)?;
        let rho0 = FockDensityMatrix::thermal_state(n0, dim).map_err(from_error)?;
        hand_out(integrate(&rho0, &model, &cfg).map_err(from_error)?, out)
    })
}

/// Evolve level populations `p[0..len]` with the ladder equations.
///
/// # Safety
///
/// `p` must point to `len` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bc_evolve_populations(
    law: u32,
    gamma: f64,
    n_bar_r: f64,
    p: *const f64,
    len: usize,
    dt: f64,
    t_end: f64,
    out: *mut *mut BcTrajectory,
) -> BcStatus {
    guard(|| {
        if p.is_null() {
            return Err(fail(BcStatus::NullPointer, "populations pointer is null"));
        }
        let (model, cfg) = model_and_config(law, gamma, n_bar_r, dt, t_end)?;
        // SAFETY: the caller provides `len` readable values.
        let p0 = unsafe { std::slice::from_raw_parts(p, len) }.to_vec();
        let p0 = PopulationVector::new(p0).map_err(from_error)?;
        hand_out(
            evolve_populations(&p0, &model, &cfg).map_err(from_error)?,
            out,
        )
    })
}

/// Number of recorded rows; 0 for a null handle.
///
/// # Safety
///
/// `traj` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn bc_trajectory_len(traj: *const BcTrajectory) -> usize {
    // SAFETY: null or a live handle from this library.
    unsafe { traj.as_ref() }.map_or(0, |t| t.inner.len())
}

fn copy_column(
    traj: *const BcTrajectory,
    buf: *mut f64,
    cap: usize,
    column: fn(&Trajectory) -> &[f64],
) -> BcStatus {
    guard(|| {
        // SAFETY: null or a live handle from this library.
        let t = unsafe { traj.as_ref() }
            .ok_or_else(|| fail(BcStatus::NullPointer, "trajectory is null"))?;
        let src = column(&t.inner);
        if cap < src.len() {
            return Err(fail(
                BcStatus::BufferTooSmall,
                format!("buffer holds {cap} values, {} needed", src.len()),
            ));
        }
        if buf.is_null() {
            return Err(fail(BcStatus::NullPointer, "buffer is null"));
        }
        // SAFETY: `buf` has room for `cap >= src.len()` values.
        unsafe { ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len()) };
        Ok(())
    })
}

/// Copy the sample times into `buf`, which must hold `bc_trajectory_len` values.
///
/// # Safety
///
/// `traj` must be null or a live handle; `buf` must have room for `cap` values.
#[no_mangle]
pub unsafe extern "C" fn bc_trajectory_copy_times(
    traj: *const BcTrajectory,
    buf: *mut f64,
    cap: usize,
) -> BcStatus {
    copy_column(traj, buf, cap, |t| &t.times)
}

/// # Safety
///
/// `traj` must be null or a live handle; `buf` must have room for `cap` values.
#[no_mangle]
pub unsafe extern "C" fn bc_trajectory_copy_n_bar(
    traj: *const BcTrajectory,
    buf: *mut f64,
    cap: usize,
) -> BcStatus {
    copy_column(traj, buf, cap, |t| &t.n_bar)
}

/// # Safety
///
/// `traj` must be null or a live handle; `buf` must have room for `cap` values.
#[no_mangle]
pub unsafe extern "C" fn bc_trajectory_copy_trace(
    traj: *const BcTrajectory,
    buf: *mut f64,
    cap: usize,
) -> BcStatus {
    copy_column(traj, buf, cap, |t| &t.trace)
}

/// # Safety
///
/// `traj` must be null or a live handle; `buf` must have room for `cap` values.
#[no_mangle]
pub unsafe extern "C" fn bc_trajectory_copy_purity(
    traj: *const BcTrajectory,
    buf: *mut f64,
    cap: usize,
) -> BcStatus {
    copy_column(traj, buf, cap, |t| &t.purity)
}

/// Release a handle. Null is accepted.
///
/// # Safety
///
/// `traj` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn bc_trajectory_free(traj: *mut BcTrajectory) {
    if !traj.is_null() {
        // SAFETY: the handle came from `Box::into_raw` in this library and is
        // freed once.
        drop(unsafe { Box::from_raw(traj) });
    }
}
