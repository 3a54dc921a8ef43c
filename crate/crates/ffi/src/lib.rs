//! C ABI for fracstep.
//!
//! Objects are opaque handles created by `*_new` functions and released with the
//! matching `*_free`. Every fallible call returns an [`FsStatus`]; on failure the
//! message is available from [`fs_last_error_message`] until the next failing
//! call on the same thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fracstep::coefficients::CoefficientSet;
use fracstep::harness::{manufactured_diffwave_with, manufactured_subdiffusion_with, measure_run, verify_all, VerifyOptions};
use fracstep::kernels::{alikhanov_row, KernelMode};
use fracstep::spatial::{Grid2D, H1Kind, SolverMode, SolverOptions};
use fracstep::steppers::{solve, ProblemSpec, SolutionHistory, StepperOptions};
use fracstep::timegrid::TimeMesh;
use fracstep::FracError;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Precondition = 3,
    SolverFailure = 4,
    Io = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Kernel evaluation strategy.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsKernel {
    Direct = 0,
    Soe = 1,
}

/// Linear solver selection.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsSolver {
    Auto = 0,
    Direct = 1,
    Iterative = 2,
}

/// Plain-data solve options; start from [`fs_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FsOptions {
    pub kernel: FsKernel,
    pub solver: FsSolver,
    pub solver_rel_tol: f64,
    pub soe_epsilon: f64,
}

/// Manufactured problem handle.
pub struct FsProblem(ProblemSpec);

/// Time mesh handle.
pub struct FsMesh(TimeMesh);

/// Computed solution handle; keeps every level.
pub struct FsSolution {
    hist: SolutionHistory,
    e1: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &FracError) -> FsStatus {
    match e {
        FracError::Precondition(_) | FracError::NonPositiveWeight { .. } => FsStatus::Precondition,
        FracError::SolverBreakdown { .. } | FracError::ConvergenceFailure(_) => FsStatus::SolverFailure,
        FracError::Io(_) => FsStatus::Io,
        _ => FsStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (FsStatus, String)>) -> FsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FsStatus::Panic
        }
    }
}

fn lift<T>(r: fracstep::Result<T>) -> Result<T, (FsStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (FsStatus, String) {
    (FsStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (FsStatus, String)> {
    // SAFETY: the caller promises `p` is null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), (FsStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    // SAFETY: checked non-null; the caller owns the pointed-to slot.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

unsafe fn preset(name: *const c_char) -> Result<CoefficientSet, (FsStatus, String)> {
    if name.is_null() {
        return Ok(CoefficientSet::variable());
    }
    // SAFETY: the caller passes a NUL-terminated string.
    let s = unsafe { CStr::from_ptr(name) }
        .to_str()
        .map_err(|_| (FsStatus::InvalidArgument, "preset name is not UTF-8".to_string()))?;
    lift(CoefficientSet::preset(s))
}

/// Message of the last failing call on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn fs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn fs_options_default() -> FsOptions {
    FsOptions {
        kernel: FsKernel::Direct,
        solver: FsSolver::Auto,
        solver_rel_tol: SolverOptions::default().rel_tol,
        soe_epsilon: 1e-12,
    }
}

/// Sub-diffusion problem with `u = sin(πx) sin(πy)(1 + t + t^α)`; `preset` may be null for `variable`.
///
/// # Safety
/// `preset` must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_problem_subdiffusion_new(alpha: f64, preset_name: *const c_char, out: *mut *mut FsProblem) -> FsStatus {
    guard(|| {
        let c = unsafe { preset(preset_name)? };
        let p = lift(manufactured_subdiffusion_with(alpha, c))?;
        unsafe { put(out, FsProblem(p)) }
    })
}

/// Diffusion-wave counterpart of [`fs_problem_subdiffusion_new`].
///
/// # Safety
/// As for [`fs_problem_subdiffusion_new`].
#[no_mangle]
pub unsafe extern "C" fn fs_problem_diffwave_new(alpha: f64, preset_name: *const c_char, out: *mut *mut FsProblem) -> FsStatus {
    guard(|| {
        let c = unsafe { preset(preset_name)? };
        let p = lift(manufactured_diffwave_with(alpha, c))?;
        unsafe { put(out, FsProblem(p)) }
    })
}

/// Offset `θ` a mesh must carry for this problem.
///
/// # Safety
/// `problem` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn fs_problem_theta(problem: *const FsProblem, out: *mut f64) -> FsStatus {
    guard(|| {
        let p = unsafe { deref(problem, "problem")? };
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        *out = p.0.theta();
        Ok(())
    })
}

/// # Safety
/// `problem` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fs_problem_free(problem: *mut FsProblem) {
    if !problem.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(problem) });
    }
}

/// Graded mesh `t_k = T (k/N)^γ`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_mesh_graded_new(n: usize, horizon: f64, gamma: f64, theta: f64, out: *mut *mut FsMesh) -> FsStatus {
    guard(|| {
        let m = lift(TimeMesh::graded(n, horizon, gamma, theta))?;
        unsafe { put(out, FsMesh(m)) }
    })
}

/// Mesh from `len` strictly increasing nodes starting at zero.
///
/// # Safety
/// `nodes` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_mesh_custom_new(nodes: *const f64, len: usize, theta: f64, out: *mut *mut FsMesh) -> FsStatus {
    guard(|| {
        if nodes.is_null() {
            return Err(null("nodes"));
        }
        // SAFETY: caller guarantees `len` readable values.
        let s = unsafe { std::slice::from_raw_parts(nodes, len) };
        let m = lift(TimeMesh::custom(s, theta))?;
        unsafe { put(out, FsMesh(m)) }
    })
}

/// Number of steps `N`; zero for a null handle.
///
/// # Safety
/// `mesh` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn fs_mesh_steps(mesh: *const FsMesh) -> usize {
    unsafe { mesh.as_ref() }.map_or(0, |m| m.0.len())
}

/// # Safety
/// `mesh` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fs_mesh_free(mesh: *mut FsMesh) {
    if !mesh.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(mesh) });
    }
}

/// Writes `A^{(n)}_{n-k}`, `k = 1..=n`, into `buf`, which must hold `n` values.
///
/// # Safety
/// `mesh` must be live; `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn fs_kernel_row(mesh: *const FsMesh, beta: f64, n: usize, buf: *mut f64, len: usize) -> FsStatus {
    guard(|| {
        let m = unsafe { deref(mesh, "mesh")? };
        if buf.is_null() {
            return Err(null("buf"));
        }
        let row = lift(alikhanov_row(&m.0, beta, n))?;
        if len < row.coeffs.len() {
            return Err((FsStatus::BufferTooSmall, format!("need {} values, got {len}", row.coeffs.len())));
        }
        // SAFETY: caller guarantees `len` writable values.
        unsafe { std::slice::from_raw_parts_mut(buf, row.coeffs.len()) }.copy_from_slice(&row.coeffs);
        Ok(())
    })
}

fn stepper_options(o: &FsOptions) -> StepperOptions {
    StepperOptions {
        solver: SolverOptions {
            mode: match o.solver {
                FsSolver::Auto => SolverMode::Auto,
                FsSolver::Direct => SolverMode::Direct,
                FsSolver::Iterative => SolverMode::Iterative,
            },
            rel_tol: o.solver_rel_tol,
            ..SolverOptions::default()
        },
        kernel: match o.kernel {
            FsKernel::Direct => KernelMode::Direct,
            FsKernel::Soe => KernelMode::Soe,
        },
        soe_epsilon: o.soe_epsilon,
        ..StepperOptions::default()
    }
}

/// Solve on an `m × m` grid of the unit square; `options` may be null for defaults.
///
/// # Safety
/// `problem` and `mesh` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_solve(
    problem: *const FsProblem,
    mesh: *const FsMesh,
    m: usize,
    options: *const FsOptions,
    out: *mut *mut FsSolution,
) -> FsStatus {
    guard(|| {
        let p = unsafe { deref(problem, "problem")? };
        let mesh = unsafe { deref(mesh, "mesh")? };
        let opts = unsafe { options.as_ref() }.copied().unwrap_or_else(|| fs_options_default());
        let grid = lift(Grid2D::new(m, m, p.0.domain))?;
        let so = stepper_options(&opts);
        let (e1, hist) = if p.0.exact.is_some() {
            let (meas, hist) = lift(measure_run(&p.0, &mesh.0, &grid, &so, H1Kind::Semi))?;
            (meas.e1, hist)
        } else {
            (f64::NAN, lift(solve(&p.0, &mesh.0, &grid, &so))?)
        };
        unsafe { put(out, FsSolution { hist, e1 }) }
    })
}

/// Interior unknowns per level, `(m-1)^2`; zero for a null handle.
///
/// # Safety
/// `solution` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn fs_solution_size(solution: *const FsSolution) -> usize {
    unsafe { solution.as_ref() }.map_or(0, |s| s.hist.grid.len())
}

/// Largest H¹-seminorm error over all levels.
///
/// # Safety
/// `solution` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_solution_error(solution: *const FsSolution, out: *mut f64) -> FsStatus {
    guard(|| {
        let s = unsafe { deref(solution, "solution")? };
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        *out = s.e1;
        Ok(())
    })
}

/// Copies level `n` of `u` (row-major, `x` fastest) into `buf`.
///
/// # Safety
/// `solution` must be live; `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn fs_solution_level(solution: *const FsSolution, n: usize, buf: *mut f64, len: usize) -> FsStatus {
    guard(|| {
        let s = unsafe { deref(solution, "solution")? };
        if buf.is_null() {
            return Err(null("buf"));
        }
        let u = s
            .hist
            .u(n)
            .ok_or_else(|| (FsStatus::InvalidArgument, format!("level {n} is not stored")))?;
        if len < u.len() {
            return Err((FsStatus::BufferTooSmall, format!("need {} values, got {len}", u.len())));
        }
        // SAFETY: caller guarantees `len` writable values.
        unsafe { std::slice::from_raw_parts_mut(buf, u.len()) }.copy_from_slice(u);
        Ok(())
    })
}

/// # Safety
/// `solution` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fs_solution_free(solution: *mut FsSolution) {
    if !solution.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(solution) });
    }
}

/// Runs the property suites; `*passed` is 1 when every suite passes. `quick` shrinks the samples.
///
/// # Safety
/// `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_verify(seed: u64, quick: bool, passed: *mut i32) -> FsStatus {
    guard(|| {
        let out = unsafe { passed.as_mut() }.ok_or_else(|| null("passed"))?;
        let base = if quick { VerifyOptions::quick() } else { VerifyOptions::default() };
        let opts = VerifyOptions { seed, ..base };
        let reports = lift(verify_all(&opts))?;
        *out = reports.iter().all(|r| r.passed()) as i32;
        Ok(())
    })
}
