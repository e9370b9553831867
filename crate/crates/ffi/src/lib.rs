//! C ABI for the sadfo solvers.
//!
//! The surface is a single solve entry point taking an objective callback,
//! plus accessors on an opaque trace handle. All functions return a
//! [`SadfoStatus`] (or are infallible); out-parameters are written only on
//! `SADFO_STATUS_OK`. Budget exhaustion mid-run is not an error: the solve
//! succeeds with the best point found and the trace reports the stop reason.

use std::ffi::{c_char, c_void, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sadfo::{
    solve_accelerated, solve_base, surrogate_gain, Activation, Error, FamilySpec, Oracle,
    RbfKernel, SolverConfig, SolverTrace, TerminalStatus,
};

/// Result codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SadfoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    /// The budget was already spent before the first evaluation, so no
    /// result exists at all.
    BudgetExhausted = 4,
    FitFailed = 5,
    IoError = 6,
    InternalError = 7,
}

/// Solver selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SadfoSolver {
    Base = 0,
    RbfSobolev = 1,
    RbfPlain = 2,
    NnSobolev = 3,
    NnPlain = 4,
}

/// Radial basis function selector for the RBF solvers.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SadfoKernel {
    Gaussian = 0,
    Multiquadratic = 1,
    Cubic = 2,
}

/// Activation selector for the NN solvers.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SadfoActivation {
    Softplus = 0,
    Sigmoid = 1,
    Silu = 2,
}

/// Why a run stopped.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SadfoTerminalStatus {
    NearStationary = 0,
    BudgetExhausted = 1,
}

/// Solver parameters; obtain defaults from [`sadfo_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SadfoConfig {
    pub sigma0: f64,
    pub sigma_min: f64,
    pub epsilon: f64,
    pub rho: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub cap_values: usize,
    pub cap_grads: usize,
    pub max_inner_halvings: usize,
}

/// One completed outer iteration of a run.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SadfoIteration {
    pub k: usize,
    pub i_k: usize,
    pub sigma_k: f64,
    /// Successful surrogate steps this iteration (0 for the base solver).
    pub t_k: usize,
    pub f_start: f64,
    pub f_after_step: f64,
    pub f_end: f64,
    pub diff_evals: usize,
    pub trial_evals: usize,
    pub surrogate_evals: usize,
    pub cum_evals: usize,
}

/// Objective callback: receives the dimension, a pointer to `dim` doubles and
/// the opaque user pointer, and returns f(x).
pub type SadfoObjective =
    unsafe extern "C" fn(dim: usize, x: *const f64, user_data: *mut c_void) -> f64;

/// Opaque per-run trace handle; free with [`sadfo_trace_free`].
pub struct SadfoTrace {
    trace: SolverTrace,
}

fn config_to_rust(config: &SadfoConfig) -> SolverConfig {
    SolverConfig {
        sigma0: config.sigma0,
        sigma_min: config.sigma_min,
        epsilon: config.epsilon,
        rho: config.rho,
        gamma: config.gamma,
        lambda: config.lambda,
        cap_values: config.cap_values,
        cap_grads: config.cap_grads,
        max_inner_halvings: config.max_inner_halvings,
    }
}

fn status_from_error(err: &Error) -> SadfoStatus {
    match err {
        Error::BudgetExhausted { .. } => SadfoStatus::BudgetExhausted,
        Error::DimensionMismatch { .. } => SadfoStatus::DimensionMismatch,
        Error::FitFailed(_) => SadfoStatus::FitFailed,
        Error::Io { .. } => SadfoStatus::IoError,
        _ => SadfoStatus::InvalidArgument,
    }
}

/// Writes the standard configuration for an `dim`-dimensional problem.
///
/// # Safety
/// `out` must point to a writable [`SadfoConfig`].
#[no_mangle]
pub unsafe extern "C" fn sadfo_config_default(dim: usize, out: *mut SadfoConfig) -> SadfoStatus {
    if out.is_null() {
        return SadfoStatus::NullPointer;
    }
    if dim == 0 {
        return SadfoStatus::InvalidArgument;
    }
    let cfg = SolverConfig::for_dimension(dim);
    *out = SadfoConfig {
        sigma0: cfg.sigma0,
        sigma_min: cfg.sigma_min,
        epsilon: cfg.epsilon,
        rho: cfg.rho,
        gamma: cfg.gamma,
        lambda: cfg.lambda,
        cap_values: cfg.cap_values,
        cap_grads: cfg.cap_grads,
        max_inner_halvings: cfg.max_inner_halvings,
    };
    SadfoStatus::Ok
}

/// Minimizes `objective` from `x0`.
///
/// `budget` caps the number of objective evaluations; pass 0 for no cap (the
/// run then ends at a near-stationary point). `config` may be null for the
/// standard configuration. On success `out_x` receives the best point found
/// and `out_f` its value; when `out_trace` is non-null it receives a handle
/// the caller must release with [`sadfo_trace_free`].
///
/// # Safety
/// `objective` must be callable with the given `user_data` for the whole
/// call; `x0` and `out_x` must point to `dim` readable/writable doubles;
/// `out_f` must be writable; `out_trace`, when non-null, must be writable.
#[no_mangle]
pub unsafe extern "C" fn sadfo_solve(
    solver: SadfoSolver,
    kernel: SadfoKernel,
    activation: SadfoActivation,
    dim: usize,
    objective: SadfoObjective,
    user_data: *mut c_void,
    x0: *const f64,
    budget: usize,
    config: *const SadfoConfig,
    seed: u64,
    out_x: *mut f64,
    out_f: *mut f64,
    out_trace: *mut *mut SadfoTrace,
) -> SadfoStatus {
    if x0.is_null() || out_x.is_null() || out_f.is_null() {
        return SadfoStatus::NullPointer;
    }
    if dim == 0 {
        return SadfoStatus::InvalidArgument;
    }
    let start = std::slice::from_raw_parts(x0, dim).to_vec();
    let cfg = if config.is_null() {
        SolverConfig::for_dimension(dim)
    } else {
        config_to_rust(&*config)
    };

    let kernel = match kernel {
        SadfoKernel::Gaussian => RbfKernel::Gaussian,
        SadfoKernel::Multiquadratic => RbfKernel::Multiquadratic,
        SadfoKernel::Cubic => RbfKernel::Cubic,
    };
    let activation = match activation {
        SadfoActivation::Softplus => Activation::Softplus,
        SadfoActivation::Sigmoid => Activation::Sigmoid,
        SadfoActivation::Silu => Activation::Silu,
    };
    let family = match solver {
        SadfoSolver::Base => None,
        SadfoSolver::RbfSobolev => Some(FamilySpec::Rbf {
            kernel,
            sobolev: true,
        }),
        SadfoSolver::RbfPlain => Some(FamilySpec::Rbf {
            kernel,
            sobolev: false,
        }),
        SadfoSolver::NnSobolev => Some(FamilySpec::Nn {
            activation,
            sobolev: true,
        }),
        SadfoSolver::NnPlain => Some(FamilySpec::Nn {
            activation,
            sobolev: false,
        }),
    };

    // The callback pointer crosses the closure boundary; solves run on the
    // calling thread only.
    let user_data_addr = user_data as usize;
    let run = move || {
        let f = move |x: &[f64]| objective(x.len(), x.as_ptr(), user_data_addr as *mut c_void);
        let mut oracle = if budget == 0 {
            Oracle::new(dim, f)
        } else {
            Oracle::with_budget(dim, budget, f)
        };
        match family {
            None => solve_base(&mut oracle, &start, &cfg),
            Some(spec) => solve_accelerated(&mut oracle, &start, &cfg, spec, seed),
        }
    };
    let result = match catch_unwind(AssertUnwindSafe(run)) {
        Ok(Ok(result)) => result,
        Ok(Err(err)) => return status_from_error(&err),
        Err(_) => return SadfoStatus::InternalError,
    };

    std::ptr::copy_nonoverlapping(result.x.as_ptr(), out_x, dim);
    *out_f = result.f;
    if !out_trace.is_null() {
        *out_trace = Box::into_raw(Box::new(SadfoTrace {
            trace: result.trace,
        }));
    }
    SadfoStatus::Ok
}

/// Number of completed outer iterations.
///
/// # Safety
/// `trace` must be a live handle from [`sadfo_solve`].
#[no_mangle]
pub unsafe extern "C" fn sadfo_trace_iterations(trace: *const SadfoTrace) -> usize {
    if trace.is_null() {
        return 0;
    }
    (*trace).trace.num_iterations()
}

/// Total oracle evaluations consumed by the run.
///
/// # Safety
/// `trace` must be a live handle from [`sadfo_solve`].
#[no_mangle]
pub unsafe extern "C" fn sadfo_trace_total_evals(trace: *const SadfoTrace) -> usize {
    if trace.is_null() {
        return 0;
    }
    (*trace).trace.total_evals
}

/// Why the run stopped.
///
/// # Safety
/// `trace` must be a live handle from [`sadfo_solve`].
#[no_mangle]
pub unsafe extern "C" fn sadfo_trace_status(trace: *const SadfoTrace) -> SadfoTerminalStatus {
    if trace.is_null() {
        return SadfoTerminalStatus::BudgetExhausted;
    }
    match (*trace).trace.status {
        TerminalStatus::NearStationary => SadfoTerminalStatus::NearStationary,
        TerminalStatus::BudgetExhausted => SadfoTerminalStatus::BudgetExhausted,
    }
}

/// Copies iteration `k` of the trace into `out`.
///
/// # Safety
/// `trace` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sadfo_trace_iteration(
    trace: *const SadfoTrace,
    k: usize,
    out: *mut SadfoIteration,
) -> SadfoStatus {
    if trace.is_null() || out.is_null() {
        return SadfoStatus::NullPointer;
    }
    let Some(rec) = (*trace).trace.iterations.get(k) else {
        return SadfoStatus::InvalidArgument;
    };
    *out = SadfoIteration {
        k: rec.k,
        i_k: rec.i_k,
        sigma_k: rec.sigma_k,
        t_k: rec.t_k,
        f_start: rec.f_start,
        f_after_step: rec.f_after_step,
        f_end: rec.f_end,
        diff_evals: rec.diff_evals,
        trial_evals: rec.trial_evals,
        surrogate_evals: rec.surrogate_evals,
        cum_evals: rec.cum_evals,
    };
    SadfoStatus::Ok
}

/// Surrogate gain `eta(S)` of the run; requires at least one completed
/// iteration.
///
/// # Safety
/// `trace` must be a live handle and `out_eta` writable.
#[no_mangle]
pub unsafe extern "C" fn sadfo_trace_surrogate_gain(
    trace: *const SadfoTrace,
    out_eta: *mut f64,
) -> SadfoStatus {
    if trace.is_null() || out_eta.is_null() {
        return SadfoStatus::NullPointer;
    }
    let handle = &*trace;
    match surrogate_gain(&handle.trace, handle.trace.x0.len()) {
        Ok(eta) => {
            *out_eta = eta;
            SadfoStatus::Ok
        }
        Err(err) => status_from_error(&err),
    }
}

/// Writes the trace as CSV (`k,i_k,sigma_k,t_k,f_xk,cum_fe`) to `path`.
///
/// # Safety
/// `trace` must be a live handle and `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn sadfo_trace_write_csv(
    trace: *const SadfoTrace,
    path: *const c_char,
) -> SadfoStatus {
    if trace.is_null() || path.is_null() {
        return SadfoStatus::NullPointer;
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        return SadfoStatus::InvalidArgument;
    };
    let Ok(file) = std::fs::File::create(path) else {
        return SadfoStatus::IoError;
    };
    match (*trace).trace.write_csv(std::io::BufWriter::new(file)) {
        Ok(()) => SadfoStatus::Ok,
        Err(_) => SadfoStatus::IoError,
    }
}

/// Releases a trace handle; null is a no-op.
///
/// # Safety
/// `trace` must be a handle from [`sadfo_solve`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sadfo_trace_free(trace: *mut SadfoTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sadfo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
