use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use polylift_ffi::*;

fn problem(n: usize, nodes: &[f64], targets: &[f64]) -> (PolyliftStatus, *mut PolyliftProblem) {
    let m = targets.len();
    let zeros_n = vec![0.0; n * m];
    let zeros_m = vec![0.0; m];
    let mut out = ptr::null_mut();
    let s = unsafe {
        polylift_problem_new(n, m, nodes.as_ptr(), zeros_n.as_ptr(), targets.as_ptr(), zeros_m.as_ptr(), &mut out)
    };
    (s, out)
}

fn last_error() -> String {
    let p = polylift_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn kernel_coefficients_through_the_handle() {
    let (s, p) = problem(2, &[0.0, 0.0, 0.5, 0.0], &[0.0, 0.5]);
    assert_eq!(s, PolyliftStatus::Ok);
    assert_eq!(unsafe { polylift_problem_len(p) }, 2);
    let (mut re, mut im) = ([0.0; 2], [0.0; 2]);
    let s = unsafe { polylift_solve_psi(p, re.as_mut_ptr(), im.as_mut_ptr(), 2) };
    assert_eq!(s, PolyliftStatus::Ok);
    assert!((re[0] + 1.5).abs() <= 1e-12 && (re[1] - 1.5).abs() <= 1e-12);
    assert_eq!(im, [0.0, 0.0]);

    let s = unsafe { polylift_solve_psi(p, re.as_mut_ptr(), im.as_mut_ptr(), 1) };
    assert_eq!(s, PolyliftStatus::BufferTooSmall);
    assert!(last_error().contains('2'));
    unsafe { polylift_problem_free(p) };
}

#[test]
fn pick_and_verdict() {
    let (_, p) = problem(2, &[0.0, 0.0, 0.5, 0.0], &[0.0, 0.9]);
    let (mut eig, mut psd) = (0.0, true);
    assert_eq!(unsafe { polylift_pick(p, &mut eig, &mut psd) }, PolyliftStatus::Ok);
    assert!(!psd && eig < 0.0);

    let mut v = PolyliftVerdict {
        outcome: PolyliftOutcome::Inconclusive,
        lower: 0.0,
        upper: 0.0,
        operator_norm: 0.0,
        pick_min_eigenvalue: 0.0,
    };
    let s = unsafe { polylift_interpolation_verdict(p, ptr::null(), &mut v) };
    assert_eq!(s, PolyliftStatus::Ok);
    assert_eq!(v.outcome, PolyliftOutcome::CertifiedNo);
    assert!(v.operator_norm > 1.0);
    unsafe { polylift_problem_free(p) };
}

#[test]
fn agler_two_node_cases() {
    let mut r = PolyliftAglerResult {
        feasibility: PolyliftFeasibility::Unknown,
        residual: 0.0,
        final_gap: 0.0,
        iterations: 0,
    };
    let (_, good) = problem(2, &[0.0, 0.0, 0.5, 0.0], &[0.0, 0.5]);
    assert_eq!(unsafe { polylift_agler(good, 5000, 1e-10, &mut r) }, PolyliftStatus::Ok);
    assert_eq!(r.feasibility, PolyliftFeasibility::Feasible);
    assert!(r.residual <= 1e-10);
    let (_, bad) = problem(2, &[0.0, 0.0, 0.5, 0.0], &[0.0, 0.9]);
    assert_eq!(unsafe { polylift_agler(bad, 5000, 1e-10, &mut r) }, PolyliftStatus::Ok);
    assert_eq!(r.feasibility, PolyliftFeasibility::Infeasible);
    assert_eq!(unsafe { polylift_agler(bad, 0, 1e-10, &mut r) }, PolyliftStatus::InvalidArgument);
    unsafe {
        polylift_problem_free(good);
        polylift_problem_free(bad);
    }
}

#[test]
fn invalid_inputs_report_errors() {
    let (s, p) = problem(1, &[0.2, 0.2], &[0.1, 0.3]);
    assert_eq!(s, PolyliftStatus::Validation);
    assert!(p.is_null());
    assert!(!last_error().is_empty());

    let (s, _) = problem(1, &[0.2], &[1.5]);
    assert_eq!(s, PolyliftStatus::Validation);

    let mut out = ptr::null_mut();
    let s = unsafe { polylift_problem_new(1, 1, ptr::null(), ptr::null(), ptr::null(), ptr::null(), &mut out) };
    assert_eq!(s, PolyliftStatus::NullPointer);

    let mut eig = 0.0;
    let s = unsafe { polylift_pick(ptr::null(), &mut eig, ptr::null_mut()) };
    assert_eq!(s, PolyliftStatus::NullPointer);
    unsafe { polylift_problem_free(ptr::null_mut()) };
}

#[test]
fn problem_from_json() {
    let json = CString::new(r#"{"n": 1, "nodes": [[{"re": 0.0, "im": 0.0}], [{"re": 0.5, "im": 0.0}]], "targets": [{"re": 0.0, "im": 0.0}, {"re": 0.5, "im": 0.0}]}"#).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { polylift_problem_from_json(json.as_ptr(), &mut p) }, PolyliftStatus::Ok);
    let (mut eig, mut psd) = (1.0, false);
    assert_eq!(unsafe { polylift_pick(p, &mut eig, &mut psd) }, PolyliftStatus::Ok);
    assert!(psd && eig.abs() <= 1e-10);
    unsafe { polylift_problem_free(p) };

    let bad = CString::new("{").unwrap();
    assert_eq!(unsafe { polylift_problem_from_json(bad.as_ptr(), &mut p) }, PolyliftStatus::Validation);
    assert!(p.is_null());
}

#[test]
fn run_returns_the_cli_report() {
    let args: Vec<CString> = ["--seed", "3", "demo"].iter().map(|a| CString::new(*a).unwrap()).collect();
    let argv: Vec<*const std::ffi::c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let (mut report, mut code) = (ptr::null_mut(), -1);
    let s = unsafe { polylift_run(argv.len(), argv.as_ptr(), &mut report, &mut code) };
    assert_eq!(s, PolyliftStatus::Ok);
    assert_eq!(code, 0);
    let text = unsafe { CStr::from_ptr(polylift_string_ptr(report)) }.to_str().unwrap().to_owned();
    assert!(text.contains("\"command\": \"demo\""));
    unsafe { polylift_string_free(report) };

    let bogus = [CString::new("nope").unwrap()];
    let argv = [bogus[0].as_ptr()];
    let s = unsafe { polylift_run(1, argv.as_ptr(), &mut report, &mut code) };
    assert_eq!(s, PolyliftStatus::Ok);
    assert_eq!(code, 3);
    unsafe { polylift_string_free(report) };
}

#[test]
fn defaults_match_the_cli() {
    let c = polylift_config_default();
    assert_eq!((c.grid_points, c.degree, c.budget_iters), (0, 12, 40));
    assert_eq!((c.yes_tol, c.no_margin), (1e-6, 1e-3));
}

#[test]
fn generated_header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("polylift.h");
    let text = std::fs::read_to_string(&header).expect("header generated by build.rs");
    for name in ["polylift_problem_new", "polylift_run", "PolyliftStatus", "polylift_last_error_message"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-std=c99", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; skipped syntax check");
        return;
    };
    assert!(status.success());
}
