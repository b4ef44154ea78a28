//! C interface to `polflow`.
//!
//! Every function returns a [`PfStatus`]. On failure the message is kept per
//! thread and can be copied out with [`pf_last_error_message`]. Handles are
//! opaque; each `*_new`/`*_find`/`*_integrate` is paired with a `*_free`.
//! Output arrays are caller-allocated.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use polflow::fisher::fisher_inverse_eta;
use polflow::flow::{
    find_fixed_points, grid_seeds, integrate, FixedPointSearch, FlowSettings, NewtonSettings, Stability,
    TerminalReason, TrajectoryRecord,
};
use polflow::indices::pol_raw;
use polflow::natgrad::natural_gradient;
use polflow::{CubicIndexCoeffs, Error, EtaCoords, Index, VectorField};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Domain = 3,
    NoConvergence = 4,
    OutOfRange = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfStability {
    Attractor = 0,
    Repeller = 1,
    Saddle = 2,
    Degenerate = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfTerminalReason {
    Converged = 0,
    MaxSteps = 1,
    LeftDomain = 2,
}

/// A vector field on `η`-coordinates.
pub struct PfField(VectorField);

/// A recorded flow trajectory.
pub struct PfTrajectory(TrajectoryRecord);

/// Deduplicated fixed points with their classifications.
pub struct PfFixedPoints(FixedPointSearch);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> PfStatus {
    match err {
        Error::NotInterior(_)
        | Error::NotOnFacet
        | Error::NotAFixedPoint(_)
        | Error::OutOfPolytope(..)
        | Error::NonPositiveState(_)
        | Error::BoundaryState(_)
        | Error::ZeroVector => PfStatus::Domain,
        Error::NoConvergence(_) => PfStatus::NoConvergence,
        _ => PfStatus::InvalidInput,
    }
}

struct Fail(PfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(PfStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> PfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(String::new());
            PfStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PfStatus::Panic
        }
    }
}

unsafe fn input<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output<'a>(p: *mut f64, len: usize, what: &str) -> Result<&'a mut [f64], Fail> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pf_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains NUL"),
    };
    VERSION.as_ptr()
}

/// Copies the calling thread's last error message into `buf` (truncated,
/// always NUL-terminated when `len > 0`). Returns the full message length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn pf_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// POL at the distribution `probs[0..len]`, which may lie on the border.
///
/// # Safety
/// `probs` must be valid for `len` reads and `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn pf_pol(probs: *const f64, len: usize, out: *mut f64) -> PfStatus {
    guard(|| {
        let p = input(probs, len, "probs")?;
        if p.is_empty() || p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("{p:?} is not a distribution")).into());
        }
        if p.iter().any(|&x| x < 0.0) {
            return Err(Error::NotInterior(format!("{p:?} has a negative entry")).into());
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("{p:?} sums to {total}")).into());
        }
        output(out, 1, "out")?[0] = pol_raw(p);
        Ok(())
    })
}

/// `I(η)⁻¹ = diag(η) − ηηᵗ` in row-major order into `out[0..n*n]`.
///
/// # Safety
/// `eta` must be valid for `n` reads and `out` for `n * n` writes.
#[no_mangle]
pub unsafe extern "C" fn pf_fisher_inverse(eta: *const f64, n: usize, out: *mut f64) -> PfStatus {
    guard(|| {
        let e = EtaCoords::extended(input(eta, n, "eta")?.to_vec());
        let m = fisher_inverse_eta(&e).entries;
        let dst = output(out, n * n, "out")?;
        for i in 0..n {
            for j in 0..n {
                dst[i * n + j] = m[(i, j)];
            }
        }
        Ok(())
    })
}

/// `grad · I(η)⁻¹` into `out[0..n]`.
///
/// # Safety
/// `grad` and `eta` must be valid for `n` reads and `out` for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn pf_natural_gradient(grad: *const f64, eta: *const f64, n: usize, out: *mut f64) -> PfStatus {
    guard(|| {
        let g = input(grad, n, "grad")?;
        let e = EtaCoords::extended(input(eta, n, "eta")?.to_vec());
        output(out, n, "out")?.copy_from_slice(&natural_gradient(g, &e)?);
        Ok(())
    })
}

/// Natural-gradient field of POL on `n` coordinates, or the Euclidean
/// gradient when `natural` is false.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pf_field_new_pol(n: usize, natural: bool, out: *mut *mut PfField) -> PfStatus {
    guard(|| {
        let f = if natural {
            VectorField::natural_gradient_of(Index::Pol, n)?
        } else {
            VectorField::euclidean_gradient_of(Index::Pol, n)?
        };
        store(out, PfField(f))
    })
}

/// Natural-gradient field of the cubic index with coefficients
/// `coeffs[0..5] = (a, b, c, d, e)` (two coordinates).
///
/// # Safety
/// `coeffs` must be valid for 5 reads and `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn pf_field_new_cubic(coeffs: *const f64, out: *mut *mut PfField) -> PfStatus {
    guard(|| {
        let c = input(coeffs, 5, "coeffs")?;
        let k = CubicIndexCoeffs::new(c[0], c[1], c[2], c[3], c[4]);
        store(out, PfField(VectorField::natural_gradient_of(Index::Cubic(k), 2)?))
    })
}

/// # Safety
/// `field` must be null or a handle from a `pf_field_new_*` call, freed once.
#[no_mangle]
pub unsafe extern "C" fn pf_field_free(field: *mut PfField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Number of coordinates the field acts on.
///
/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pf_field_dim(field: *const PfField) -> usize {
    field.as_ref().map_or(0, |f| f.0.dim())
}

/// Field value at `eta[0..n]` into `out[0..n]`.
///
/// # Safety
/// `field` must be a live handle, `eta` valid for `n` reads, `out` for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn pf_field_eval(field: *const PfField, eta: *const f64, n: usize, out: *mut f64) -> PfStatus {
    guard(|| {
        let f = &handle(field, "field")?.0;
        if n != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), got: n }.into());
        }
        output(out, n, "out")?.copy_from_slice(&f.eval(input(eta, n, "eta")?));
        Ok(())
    })
}

/// Fixed-step RK4 flow from the interior point `start[0..n]`.
///
/// A trajectory that stops for a reason other than convergence is still
/// returned; inspect [`pf_trajectory_terminal_reason`].
///
/// # Safety
/// `field` must be a live handle, `start` valid for `n` reads, `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn pf_flow_integrate(
    field: *const PfField,
    start: *const f64,
    n: usize,
    dt: f64,
    t_max: f64,
    stop_tol: f64,
    out: *mut *mut PfTrajectory,
) -> PfStatus {
    guard(|| {
        let f = &handle(field, "field")?.0;
        let eta0 = EtaCoords::new(input(start, n, "start")?.to_vec())?;
        let record = integrate(f, &eta0, FlowSettings { dt, t_max, stop_tol })?;
        store(out, PfTrajectory(record))
    })
}

/// # Safety
/// `traj` must be null or a handle from [`pf_flow_integrate`], freed once.
#[no_mangle]
pub unsafe extern "C" fn pf_trajectory_free(traj: *mut PfTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Number of recorded states, including the start.
///
/// # Safety
/// `traj` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pf_trajectory_len(traj: *const PfTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.0.len())
}

/// # Safety
/// `traj` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pf_trajectory_terminal_reason(traj: *const PfTrajectory) -> PfTerminalReason {
    match traj.as_ref().map(|t| t.0.terminal_reason) {
        Some(TerminalReason::Converged) => PfTerminalReason::Converged,
        Some(TerminalReason::MaxSteps) => PfTerminalReason::MaxSteps,
        _ => PfTerminalReason::LeftDomain,
    }
}

/// Time, index value and state of step `i`; `state` receives `n` values.
///
/// # Safety
/// `traj` must be a live handle; `time` and `value` null or valid for one
/// write; `state` valid for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn pf_trajectory_step(
    traj: *const PfTrajectory,
    i: usize,
    time: *mut f64,
    value: *mut f64,
    state: *mut f64,
    n: usize,
) -> PfStatus {
    guard(|| {
        let t = &handle(traj, "traj")?.0;
        if i >= t.len() {
            return Err(Fail(PfStatus::OutOfRange, format!("step {i} of {}", t.len())));
        }
        let s = &t.states[i];
        if n != s.len() {
            return Err(Error::DimensionMismatch { expected: s.len(), got: n }.into());
        }
        output(state, n, "state")?.copy_from_slice(s);
        if let Some(p) = time.as_mut() {
            *p = t.times[i];
        }
        if let Some(p) = value.as_mut() {
            *p = t.values[i];
        }
        Ok(())
    })
}

/// Newton search from a `grid × grid` lattice of seeds on `[lo, hi]²`,
/// keeping roots in the closed simplex.
///
/// # Safety
/// `field` must be a live two-coordinate handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pf_fixed_points_find(
    field: *const PfField,
    grid: usize,
    lo: f64,
    hi: f64,
    tol: f64,
    out: *mut *mut PfFixedPoints,
) -> PfStatus {
    guard(|| {
        let f = &handle(field, "field")?.0;
        if f.dim() != 2 {
            return Err(Error::UnsupportedDimension { expected: 2, got: f.dim() }.into());
        }
        if grid == 0 || lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Fail(PfStatus::InvalidInput, format!("empty seed grid {grid} on [{lo}, {hi}]")));
        }
        let settings = NewtonSettings { tol, ..NewtonSettings::default() };
        store(out, PfFixedPoints(find_fixed_points(f, &grid_seeds(grid, lo, hi), &settings)))
    })
}

/// # Safety
/// `points` must be null or a handle from [`pf_fixed_points_find`], freed once.
#[no_mangle]
pub unsafe extern "C" fn pf_fixed_points_free(points: *mut PfFixedPoints) {
    if !points.is_null() {
        drop(Box::from_raw(points));
    }
}

/// # Safety
/// `points` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pf_fixed_points_count(points: *const PfFixedPoints) -> usize {
    points.as_ref().map_or(0, |p| p.0.points.len())
}

/// Location (2 values), residual and classification of fixed point `i`.
///
/// # Safety
/// `points` must be a live handle; `location` valid for 2 writes; `residual`
/// and `stability` null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pf_fixed_points_get(
    points: *const PfFixedPoints,
    i: usize,
    location: *mut f64,
    residual: *mut f64,
    stability: *mut PfStability,
) -> PfStatus {
    guard(|| {
        let all = &handle(points, "points")?.0.points;
        let p = all.get(i).ok_or_else(|| Fail(PfStatus::OutOfRange, format!("fixed point {i} of {}", all.len())))?;
        output(location, 2, "location")?.copy_from_slice(&p.location);
        if let Some(r) = residual.as_mut() {
            *r = p.residual;
        }
        if let Some(s) = stability.as_mut() {
            *s = match p.classification {
                Stability::Attractor => PfStability::Attractor,
                Stability::Repeller => PfStability::Repeller,
                Stability::Saddle => PfStability::Saddle,
                Stability::Degenerate => PfStability::Degenerate,
            };
        }
        Ok(())
    })
}
