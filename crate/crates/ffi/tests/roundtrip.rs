use std::ffi::{CStr, CString};
use std::ptr;

use dqsolve_ffi::*;

fn new_matrix(rows: usize, cols: usize, data: &[f64]) -> *mut DqsMatrix {
    let mut m = ptr::null_mut();
    let status = unsafe { dqs_matrix_new(rows, cols, data.as_ptr(), data.len(), &mut m) };
    assert_eq!(status, DqsStatus::Ok, "{}", last_error());
    m
}

fn entries(m: *const DqsMatrix) -> Vec<f64> {
    let len = unsafe { dqs_matrix_rows(m) * dqs_matrix_cols(m) } * DQS_ENTRY_DOUBLES;
    let mut buf = vec![0.0; len];
    assert_eq!(unsafe { dqs_matrix_entries(m, buf.as_mut_ptr(), len) }, DqsStatus::Ok);
    buf
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(dqs_last_error()) }.to_string_lossy().into_owned()
}

/// Real-scalar dual entry `s + t ε` for a diagonal test matrix.
fn scalar(s: f64, t: f64) -> [f64; 8] {
    [s, 0.0, 0.0, 0.0, t, 0.0, 0.0, 0.0]
}

fn diag(values: &[(f64, f64)]) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n * n * 8];
    for (i, &(s, t)) in values.iter().enumerate() {
        out[(i * n + i) * 8..][..8].copy_from_slice(&scalar(s, t));
    }
    out
}

#[test]
fn entries_round_trip() {
    let data: Vec<f64> = (0..2 * 3 * 8).map(|v| v as f64 * 0.5 - 3.0).collect();
    let m = new_matrix(2, 3, &data);
    assert_eq!(unsafe { (dqs_matrix_rows(m), dqs_matrix_cols(m)) }, (2, 3));
    assert_eq!(entries(m), data);
    unsafe { dqs_matrix_free(m) };
}

#[test]
fn text_round_trip() {
    let m = new_matrix(1, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, -1.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 1e-3]);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { dqs_matrix_render(m, &mut text) }, DqsStatus::Ok);
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { dqs_matrix_parse(text, &mut back) }, DqsStatus::Ok);
    assert_eq!(entries(back), entries(m));
    unsafe {
        dqs_string_free(text);
        dqs_matrix_free(m);
        dqs_matrix_free(back);
    }
}

#[test]
fn solve_diagonal_system() {
    // A = diag(2, 1+ε), X = diag(1, 3ε) gives B = AX, D = XC with C = I.
    let a = new_matrix(2, 2, &diag(&[(2.0, 0.0), (1.0, 1.0)]));
    let b = new_matrix(2, 2, &diag(&[(2.0, 0.0), (0.0, 3.0)]));
    let c = new_matrix(2, 2, &diag(&[(1.0, 0.0), (1.0, 0.0)]));
    let d = new_matrix(2, 2, &diag(&[(1.0, 0.0), (0.0, 3.0)]));
    let mut o = ptr::null_mut();
    let status = unsafe { dqs_solve_system(a, b, c, d, ptr::null(), DqsMode::Both, &mut o) };
    assert_eq!(status, DqsStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { dqs_outcome_solvable(o) }, 1);
    assert_eq!(unsafe { dqs_outcome_failed_count(o) }, 0);

    let mut x = ptr::null_mut();
    assert_eq!(unsafe { dqs_outcome_particular(o, &mut x) }, DqsStatus::Ok);
    let expected = diag(&[(1.0, 0.0), (0.0, 3.0)]);
    for (got, want) in entries(x).iter().zip(&expected) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { dqs_outcome_sample(o, 7, 1.0, &mut s) }, DqsStatus::Ok);
    let (mut r1, mut r2) = (1.0, 1.0);
    assert_eq!(unsafe { dqs_verify_residual(a, b, c, d, s, &mut r1, &mut r2) }, DqsStatus::Ok);
    assert!(r1 < 1e-10 && r2 < 1e-10, "{r1} {r2}");
    unsafe {
        for m in [a, b, c, d, x, s] {
            dqs_matrix_free(m);
        }
        dqs_outcome_free(o);
    }
}

#[test]
fn one_sided_and_eta_solvers() {
    let eye = new_matrix(2, 2, &diag(&[(1.0, 0.0), (1.0, 0.0)]));
    let b = new_matrix(2, 2, &diag(&[(2.0, 1.0), (-1.0, 0.0)]));
    let tol = dqs_tolerance_default();
    unsafe {
        for eta in [DqsEta::I, DqsEta::J, DqsEta::K] {
            let mut o = ptr::null_mut();
            assert_eq!(dqs_solve_ax_b_eta_hermitian(eye, b, eta, &tol, &mut o), DqsStatus::Ok);
            assert_eq!(dqs_outcome_solvable(o), 1);
            dqs_outcome_free(o);
        }
        let mut o = ptr::null_mut();
        assert_eq!(dqs_solve_ax_b(eye, b, &tol, &mut o), DqsStatus::Ok);
        assert_eq!(dqs_outcome_solvable(o), 1);
        dqs_outcome_free(o);
        assert_eq!(dqs_solve_xc_d(eye, b, &tol, &mut o), DqsStatus::Ok);
        assert_eq!(dqs_outcome_solvable(o), 1);
        dqs_outcome_free(o);
        dqs_matrix_free(eye);
        dqs_matrix_free(b);
    }
}

#[test]
fn unsolvable_outcome_reports_conditions() {
    // A = ε I has zero standard part, so AX = B with B0 ≠ 0 fails.
    let a = new_matrix(1, 1, &scalar(0.0, 1.0));
    let b = new_matrix(1, 1, &scalar(1.0, 0.0));
    unsafe {
        let mut o = ptr::null_mut();
        assert_eq!(dqs_solve_ax_b(a, b, ptr::null(), &mut o), DqsStatus::Ok);
        assert_eq!(dqs_outcome_solvable(o), 0);
        assert!(dqs_outcome_failed_count(o) >= 1);
        let first = CStr::from_ptr(dqs_outcome_failed_name(o, 0)).to_str().unwrap();
        assert_eq!(first, "R_{A0}B0=0");
        assert!(dqs_outcome_failed_name(o, 99).is_null());
        let mut x = ptr::null_mut();
        assert_eq!(dqs_outcome_particular(o, &mut x), DqsStatus::Unsolvable);
        assert!(x.is_null());
        assert_eq!(dqs_outcome_sample(o, 1, 1.0, &mut x), DqsStatus::Unsolvable);
        dqs_outcome_free(o);
        dqs_matrix_free(a);
        dqs_matrix_free(b);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(dqs_matrix_new(2, 2, [0.0; 8].as_ptr(), 8, &mut m), DqsStatus::InvalidArgument);
        assert!(last_error().contains("needs 32 doubles"));
        assert_eq!(dqs_matrix_new(0, 1, [0.0; 0].as_ptr(), 0, &mut m), DqsStatus::InvalidArgument);
        assert_eq!(dqs_matrix_new(1, 1, ptr::null(), 8, &mut m), DqsStatus::NullPointer);
        let nan = [f64::NAN, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert_eq!(dqs_matrix_new(1, 1, nan.as_ptr(), 8, &mut m), DqsStatus::InvalidArgument);

        let bad = CString::new("dqmatrix 1 1\n(1 2 3 | 4 5 6 7)").unwrap();
        assert_eq!(dqs_matrix_parse(bad.as_ptr(), &mut m), DqsStatus::Parse);
        assert!(last_error().starts_with("line 2"), "{}", last_error());

        let a = new_matrix(1, 2, &[0.0; 16]);
        let b = new_matrix(2, 1, &[0.0; 16]);
        let mut o = ptr::null_mut();
        assert_eq!(dqs_solve_ax_b(a, b, ptr::null(), &mut o), DqsStatus::ShapeMismatch);
        assert!(o.is_null());
        let tol = DqsTolerance { rank_rel: -1.0, zero_abs: 1e-10 };
        assert_eq!(dqs_solve_ax_b(a, a, &tol, &mut o), DqsStatus::InvalidTolerance);
        assert_eq!(dqs_solve_ax_b_eta_hermitian(a, a, DqsEta::J, ptr::null(), &mut o), DqsStatus::ShapeMismatch);

        let sq = new_matrix(1, 1, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(dqs_solve_ax_b_eta_hermitian(sq, sq, DqsEta::I, ptr::null(), &mut o), DqsStatus::NotEtaHermitian);
        assert_eq!(dqs_solve_ax_b(ptr::null(), sq, ptr::null(), &mut o), DqsStatus::NullPointer);
        assert_eq!(dqs_solve_ax_b(sq, sq, ptr::null(), &mut o), DqsStatus::Ok);
        assert_eq!(last_error(), "");
        dqs_outcome_free(o);
        for m in [a, b, sq] {
            dqs_matrix_free(m);
        }
        dqs_matrix_free(ptr::null_mut());
        dqs_outcome_free(ptr::null_mut());
    }
}
