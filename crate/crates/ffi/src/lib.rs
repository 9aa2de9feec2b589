//! C interface. Problems are opaque handles; every call returns a [`PolyliftStatus`] and the
//! message of the last failure on the calling thread is available from
//! [`polylift_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use polylift::interp::{self, AglerConfig, Feasibility, InterpConfig, InterpError, InterpolationProblem};
use polylift::kernels::Point;
use polylift::lifting::{LiftConfig, Outcome};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyliftStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Validation = 3,
    Numerical = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyliftOutcome {
    CertifiedYes = 0,
    CertifiedNo = 1,
    Inconclusive = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyliftFeasibility {
    Feasible = 0,
    Infeasible = 1,
    Unknown = 2,
}

/// Run parameters. `grid_points == 0` selects the dimension-dependent default.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyliftConfig {
    pub grid_points: usize,
    pub degree: u32,
    pub seed: u64,
    pub budget_iters: usize,
    pub yes_tol: f64,
    pub no_margin: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyliftVerdict {
    pub outcome: PolyliftOutcome,
    pub lower: f64,
    pub upper: f64,
    pub operator_norm: f64,
    pub pick_min_eigenvalue: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyliftAglerResult {
    pub feasibility: PolyliftFeasibility,
    pub residual: f64,
    pub final_gap: f64,
    pub iterations: usize,
}

/// Opaque interpolation problem.
pub struct PolyliftProblem {
    inner: InterpolationProblem,
}

/// Opaque owned C string.
pub struct PolyliftString {
    text: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: PolyliftStatus, message: impl Into<String>) -> PolyliftStatus {
    set_error(message.into());
    status
}

fn interp_status(e: &InterpError) -> PolyliftStatus {
    match e {
        InterpError::Kernel(_) | InterpError::Quotient(_) | InterpError::Lift(_) => PolyliftStatus::Numerical,
        _ => PolyliftStatus::Validation,
    }
}

fn guard(f: impl FnOnce() -> PolyliftStatus) -> PolyliftStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == PolyliftStatus::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            s
        }
        Err(_) => fail(PolyliftStatus::Panic, "internal panic"),
    }
}

impl From<Outcome> for PolyliftOutcome {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::CertifiedYes => Self::CertifiedYes,
            Outcome::CertifiedNo => Self::CertifiedNo,
            Outcome::Inconclusive => Self::Inconclusive,
        }
    }
}

impl From<Feasibility> for PolyliftFeasibility {
    fn from(f: Feasibility) -> Self {
        match f {
            Feasibility::Feasible => Self::Feasible,
            Feasibility::Infeasible => Self::Infeasible,
            Feasibility::Unknown => Self::Unknown,
        }
    }
}

impl PolyliftConfig {
    fn to_interp(self) -> Result<InterpConfig, String> {
        if self.degree == 0 || self.budget_iters == 0 {
            return Err("degree and budget_iters must be positive".into());
        }
        if !(self.yes_tol > 0.0 && self.no_margin > 0.0) {
            return Err("tolerances must be positive".into());
        }
        Ok(InterpConfig {
            lift: LiftConfig {
                grid_points: (self.grid_points > 0).then_some(self.grid_points),
                seed: self.seed,
                budget_iters: self.budget_iters,
                yes_tol: self.yes_tol,
                no_margin: self.no_margin,
                ..LiftConfig::default()
            },
            degree: self.degree,
        })
    }
}

/// Defaults matching the command-line tool.
#[no_mangle]
pub extern "C" fn polylift_config_default() -> PolyliftConfig {
    let lift = LiftConfig::default();
    PolyliftConfig {
        grid_points: 0,
        degree: InterpConfig::default().degree,
        seed: lift.seed,
        budget_iters: lift.budget_iters,
        yes_tol: lift.yes_tol,
        no_margin: lift.no_margin,
    }
}

/// Message of the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn polylift_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a problem from `m` nodes in `n` variables. Node coordinates are row-major
/// (`nodes_re[i * n + j]` is the real part of coordinate `j` of node `i`).
///
/// # Safety
/// The coordinate arrays must hold `m * n` values, the target arrays `m`, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn polylift_problem_new(
    n: usize,
    m: usize,
    nodes_re: *const f64,
    nodes_im: *const f64,
    targets_re: *const f64,
    targets_im: *const f64,
    out: *mut *mut PolyliftProblem,
) -> PolyliftStatus {
    guard(|| {
        if out.is_null() || nodes_re.is_null() || nodes_im.is_null() || targets_re.is_null() || targets_im.is_null() {
            return fail(PolyliftStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        if n == 0 || m == 0 {
            return fail(PolyliftStatus::InvalidArgument, "n and m must be positive");
        }
        let Some(len) = n.checked_mul(m) else {
            return fail(PolyliftStatus::InvalidArgument, "n * m overflows");
        };
        let re = std::slice::from_raw_parts(nodes_re, len);
        let im = std::slice::from_raw_parts(nodes_im, len);
        let mut nodes = Vec::with_capacity(m);
        for i in 0..m {
            let z = (0..n).map(|j| Complex64::new(re[i * n + j], im[i * n + j])).collect();
            match Point::new(z) {
                Ok(p) => nodes.push(p),
                Err(e) => return fail(PolyliftStatus::Validation, format!("node {i}: {e}")),
            }
        }
        let tr = std::slice::from_raw_parts(targets_re, m);
        let ti = std::slice::from_raw_parts(targets_im, m);
        let targets = tr.iter().zip(ti).map(|(a, b)| Complex64::new(*a, *b)).collect();
        match InterpolationProblem::new(nodes, targets) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(PolyliftProblem { inner }));
                PolyliftStatus::Ok
            }
            Err(e) => fail(interp_status(&e), e.to_string()),
        }
    })
}

/// Parses a problem from its JSON form (`{"n", "nodes", "targets"}`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn polylift_problem_from_json(json: *const c_char, out: *mut *mut PolyliftProblem) -> PolyliftStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(PolyliftStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(PolyliftStatus::InvalidArgument, "problem is not UTF-8");
        };
        match serde_json::from_str::<InterpolationProblem>(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(PolyliftProblem { inner }));
                PolyliftStatus::Ok
            }
            Err(e) => fail(PolyliftStatus::Validation, e.to_string()),
        }
    })
}

/// # Safety
/// `problem` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn polylift_problem_free(problem: *mut PolyliftProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Number of nodes, or 0 for NULL.
///
/// # Safety
/// `problem` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn polylift_problem_len(problem: *const PolyliftProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.inner.len())
}

/// Smallest eigenvalue of the Pick matrix and whether it is PSD within tolerance.
///
/// # Safety
/// `problem` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn polylift_pick(
    problem: *const PolyliftProblem,
    min_eigenvalue: *mut f64,
    psd: *mut bool,
) -> PolyliftStatus {
    guard(|| {
        let (Some(p), false, false) = (problem.as_ref(), min_eigenvalue.is_null(), psd.is_null()) else {
            return fail(PolyliftStatus::NullPointer, "null argument");
        };
        let check = interp::pick_matrix_check(&p.inner);
        *min_eigenvalue = check.min_eigenvalue;
        *psd = check.psd;
        PolyliftStatus::Ok
    })
}

/// Coefficients `c` of the minimal-norm interpolant `Σ c_j 𝕊(·, z_j)`; arrays hold `capacity` values.
///
/// # Safety
/// `problem` must be a live handle; the coefficient arrays must hold `capacity` writable values.
#[no_mangle]
pub unsafe extern "C" fn polylift_solve_psi(
    problem: *const PolyliftProblem,
    coeffs_re: *mut f64,
    coeffs_im: *mut f64,
    capacity: usize,
) -> PolyliftStatus {
    guard(|| {
        let Some(p) = problem.as_ref() else {
            return fail(PolyliftStatus::NullPointer, "null problem");
        };
        if coeffs_re.is_null() || coeffs_im.is_null() {
            return fail(PolyliftStatus::NullPointer, "null output");
        }
        if capacity < p.inner.len() {
            return fail(PolyliftStatus::BufferTooSmall, format!("need {} coefficients", p.inner.len()));
        }
        match interp::solve_psi(&p.inner) {
            Ok(combo) => {
                let re = std::slice::from_raw_parts_mut(coeffs_re, capacity);
                let im = std::slice::from_raw_parts_mut(coeffs_im, capacity);
                for (i, c) in combo.coeffs().iter().enumerate() {
                    re[i] = c.re;
                    im[i] = c.im;
                }
                PolyliftStatus::Ok
            }
            Err(e) => fail(interp_status(&e), e.to_string()),
        }
    })
}

/// Schur interpolation verdict. `config` may be NULL for defaults.
///
/// # Safety
/// `problem` must be a live handle, `config` NULL or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn polylift_interpolation_verdict(
    problem: *const PolyliftProblem,
    config: *const PolyliftConfig,
    out: *mut PolyliftVerdict,
) -> PolyliftStatus {
    guard(|| {
        let Some(p) = problem.as_ref() else {
            return fail(PolyliftStatus::NullPointer, "null problem");
        };
        if out.is_null() {
            return fail(PolyliftStatus::NullPointer, "null output");
        }
        let cfg = match config.as_ref().copied().unwrap_or_else(|| polylift_config_default()).to_interp() {
            Ok(c) => c,
            Err(msg) => return fail(PolyliftStatus::InvalidArgument, msg),
        };
        match interp::interpolation_verdict(&p.inner, &cfg) {
            Ok(r) => {
                *out = PolyliftVerdict {
                    outcome: r.verdict.outcome.into(),
                    lower: r.verdict.estimate.lower,
                    upper: r.verdict.estimate.upper,
                    operator_norm: r.verdict.operator_norm.unwrap_or(f64::NAN),
                    pick_min_eigenvalue: r.pick.min_eigenvalue,
                };
                PolyliftStatus::Ok
            }
            Err(e) => fail(interp_status(&e), e.to_string()),
        }
    })
}

/// Agler decomposition feasibility for two-variable data. `residual` is NaN without a witness.
///
/// # Safety
/// `problem` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn polylift_agler(
    problem: *const PolyliftProblem,
    max_iters: usize,
    psd_tol: f64,
    out: *mut PolyliftAglerResult,
) -> PolyliftStatus {
    guard(|| {
        let Some(p) = problem.as_ref() else {
            return fail(PolyliftStatus::NullPointer, "null problem");
        };
        if out.is_null() {
            return fail(PolyliftStatus::NullPointer, "null output");
        }
        if !(psd_tol.is_finite() && psd_tol > 0.0) || max_iters == 0 {
            return fail(PolyliftStatus::InvalidArgument, "max_iters and psd_tol must be positive");
        }
        match interp::agler_feasibility(&p.inner, &AglerConfig { max_iters, psd_tol }) {
            Ok(r) => {
                *out = PolyliftAglerResult {
                    feasibility: r.feasible.into(),
                    residual: r.witness.as_ref().map_or(f64::NAN, |w| w.residual),
                    final_gap: r.final_gap,
                    iterations: r.iterations,
                };
                PolyliftStatus::Ok
            }
            Err(e) => fail(interp_status(&e), e.to_string()),
        }
    })
}

/// Runs the command-line tool on `argv` (without the program name) and returns its JSON report
/// and exit code. The report is freed with [`polylift_string_free`].
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn polylift_run(
    argc: usize,
    argv: *const *const c_char,
    report: *mut *mut PolyliftString,
    exit_code: *mut i32,
) -> PolyliftStatus {
    guard(|| {
        if report.is_null() || exit_code.is_null() || (argc > 0 && argv.is_null()) {
            return fail(PolyliftStatus::NullPointer, "null argument");
        }
        *report = ptr::null_mut();
        let mut args = vec!["polylift".to_string()];
        for i in 0..argc {
            let a = *argv.add(i);
            if a.is_null() {
                return fail(PolyliftStatus::NullPointer, format!("argv[{i}] is NULL"));
            }
            match CStr::from_ptr(a).to_str() {
                Ok(s) => args.push(s.to_string()),
                Err(_) => return fail(PolyliftStatus::InvalidArgument, format!("argv[{i}] is not UTF-8")),
            }
        }
        let (text, code) = polylift::cli::run_to_string(args);
        *exit_code = code;
        *report = Box::into_raw(Box::new(PolyliftString {
            text: CString::new(text.replace('\0', " ")).unwrap_or_default(),
        }));
        PolyliftStatus::Ok
    })
}

/// Borrowed view of the text, valid until the handle is freed.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn polylift_string_ptr(s: *const PolyliftString) -> *const c_char {
    s.as_ref().map_or(ptr::null(), |s| s.text.as_ptr())
}

/// # Safety
/// `s` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn polylift_string_free(s: *mut PolyliftString) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}
