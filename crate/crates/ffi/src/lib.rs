//! C ABI for `dqsolve`.
//!
//! Matrices and solve results are opaque heap handles owned by the caller
//! and released with their `_free` function. Every fallible call returns a
//! [`DqsStatus`]; on failure a human-readable message is available from
//! [`dqs_last_error`] on the same thread.
//!
//! Entries cross the boundary as 8 doubles each, row-major:
//! `std.w, std.x, std.y, std.z, inf.w, inf.x, inf.y, inf.z`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dqsolve::format::{parse_dqm, render_dqm};
use dqsolve::{
    solve_ax_b, solve_ax_b_eta_hermitian, solve_dual_system, solve_xc_d, verify_residual, ConditionMode,
    DualQuatMatrix, DualQuaternion, Error, EtaAxis, Quaternion, SolveOutcome, Tolerance,
};

/// Doubles per dual quaternion entry.
pub const DQS_ENTRY_DOUBLES: usize = 8;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DqsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ShapeMismatch = 3,
    Parse = 4,
    InvalidTolerance = 5,
    NotEtaHermitian = 6,
    ConditionDisagreement = 7,
    Numerical = 8,
    /// The system has no solution; there is no particular solution or sample.
    Unsolvable = 9,
    Panic = 10,
}

/// Which condition family decides solvability of the full system.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DqsMode {
    Both = 0,
    Projector = 1,
    Rank = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DqsEta {
    I = 0,
    J = 1,
    K = 2,
}

/// Rank cutoff is `rank_rel * sigma_max`; a residual counts as zero when it
/// is at most `zero_abs * (1 + scale)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DqsTolerance {
    pub rank_rel: f64,
    pub zero_abs: f64,
}

/// Opaque dual quaternion matrix.
pub struct DqsMatrix {
    inner: DualQuatMatrix,
}

/// Opaque solve result.
pub struct DqsOutcome {
    inner: SolveOutcome<DualQuatMatrix>,
    failed: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(DqsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::EmptyShape { .. } | Error::EntryCount { .. } => DqsStatus::InvalidArgument,
            Error::ShapeMismatch { .. } | Error::NotSquare { .. } => DqsStatus::ShapeMismatch,
            Error::AdjointStructure { .. } => DqsStatus::Numerical,
            Error::NotEtaHermitian { .. } => DqsStatus::NotEtaHermitian,
            Error::ConditionFamilyDisagreement { .. } => DqsStatus::ConditionDisagreement,
            Error::InvalidTolerance(_) => DqsStatus::InvalidTolerance,
            Error::Parse { .. } => DqsStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DqsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            DqsStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            DqsStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(DqsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn matrix<'a>(p: *const DqsMatrix, what: &str) -> Result<&'a DualQuatMatrix, Failure> {
    p.as_ref().map(|m| &m.inner).ok_or_else(|| null(what))
}

unsafe fn outcome<'a>(p: *const DqsOutcome) -> Result<&'a DqsOutcome, Failure> {
    p.as_ref().ok_or_else(|| null("outcome"))
}

unsafe fn out_slot<'a, T>(p: *mut *mut T) -> Result<&'a mut *mut T, Failure> {
    let slot = p.as_mut().ok_or_else(|| null("output pointer"))?;
    *slot = ptr::null_mut();
    Ok(slot)
}

unsafe fn tolerance(p: *const DqsTolerance) -> Result<Tolerance, Failure> {
    match p.as_ref() {
        None => Ok(Tolerance::default()),
        Some(t) => Ok(Tolerance::new(t.rank_rel, t.zero_abs)?),
    }
}

fn boxed(m: DualQuatMatrix) -> *mut DqsMatrix {
    Box::into_raw(Box::new(DqsMatrix { inner: m }))
}

fn boxed_outcome(o: SolveOutcome<DualQuatMatrix>) -> *mut DqsOutcome {
    let failed = o
        .failed_conditions
        .iter()
        .map(|s| CString::new(s.as_str()).unwrap_or_default())
        .collect();
    Box::into_raw(Box::new(DqsOutcome { inner: o, failed }))
}

/// Message for the most recent failing call on this thread, or "" after a
/// success. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn dqs_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn dqs_tolerance_default() -> DqsTolerance {
    let t = Tolerance::default();
    DqsTolerance {
        rank_rel: t.rank_rel,
        zero_abs: t.zero_abs,
    }
}

/// Builds a matrix from `rows * cols * 8` doubles.
///
/// # Safety
/// `data` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dqs_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    len: usize,
    out: *mut *mut DqsMatrix,
) -> DqsStatus {
    guard(|| {
        let slot = out_slot(out)?;
        if data.is_null() {
            return Err(null("data"));
        }
        let expected = rows
            .checked_mul(cols)
            .and_then(|n| n.checked_mul(DQS_ENTRY_DOUBLES))
            .ok_or_else(|| Failure(DqsStatus::InvalidArgument, format!("{rows}x{cols} overflows")))?;
        if len != expected {
            return Err(Failure(
                DqsStatus::InvalidArgument,
                format!("{rows}x{cols} matrix needs {expected} doubles, got {len}"),
            ));
        }
        let values = std::slice::from_raw_parts(data, len);
        let entries: Vec<DualQuaternion> = values
            .chunks_exact(DQS_ENTRY_DOUBLES)
            .map(|e| DualQuaternion {
                std: Quaternion::new(e[0], e[1], e[2], e[3]),
                inf: Quaternion::new(e[4], e[5], e[6], e[7]),
            })
            .collect();
        if entries.iter().any(|e| !(e.std.is_finite() && e.inf.is_finite())) {
            return Err(Failure(DqsStatus::InvalidArgument, "entries must be finite".into()));
        }
        *slot = boxed(DualQuatMatrix::from_entries(rows, cols, &entries)?);
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dqs_matrix_free(m: *mut DqsMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Row count, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dqs_matrix_rows(m: *const DqsMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.rows())
}

/// Column count, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dqs_matrix_cols(m: *const DqsMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.cols())
}

/// Copies all entries into `buf`, which must hold exactly `rows * cols * 8` doubles.
///
/// # Safety
/// `m` must be a live handle; `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn dqs_matrix_entries(m: *const DqsMatrix, buf: *mut f64, len: usize) -> DqsStatus {
    guard(|| {
        let m = matrix(m, "matrix")?;
        if buf.is_null() {
            return Err(null("buffer"));
        }
        let (rows, cols) = m.shape();
        let expected = rows * cols * DQS_ENTRY_DOUBLES;
        if len != expected {
            return Err(Failure(
                DqsStatus::InvalidArgument,
                format!("buffer for a {rows}x{cols} matrix needs {expected} doubles, got {len}"),
            ));
        }
        let buf = std::slice::from_raw_parts_mut(buf, len);
        for r in 0..rows {
            for c in 0..cols {
                let e = m.get(r, c).expect("index in range");
                let at = (r * cols + c) * DQS_ENTRY_DOUBLES;
                buf[at..at + 4].copy_from_slice(&e.std.to_array());
                buf[at + 4..at + 8].copy_from_slice(&e.inf.to_array());
            }
        }
        Ok(())
    })
}

/// Parses one matrix in `.dqm` text form.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dqs_matrix_parse(text: *const c_char, out: *mut *mut DqsMatrix) -> DqsStatus {
    guard(|| {
        let slot = out_slot(out)?;
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure(DqsStatus::Parse, format!("input is not UTF-8: {e}")))?;
        *slot = boxed(parse_dqm(text)?);
        Ok(())
    })
}

/// Renders a matrix as `.dqm` text. Release the string with [`dqs_string_free`].
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dqs_matrix_render(m: *const DqsMatrix, out: *mut *mut c_char) -> DqsStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let text = render_dqm(matrix(m, "matrix")?, &[]);
        *slot = CString::new(text).expect("rendered text has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dqs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Solves `AX = B, XC = D` for `A: m×n, B: m×k, C: k×l, D: n×l`.
/// A null `tol` selects the defaults. An unsolvable system is still `Ok`;
/// query it with [`dqs_outcome_solvable`].
///
/// # Safety
/// Matrix arguments must be live handles; `tol` null or valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dqs_solve_system(
    a: *const DqsMatrix,
    b: *const DqsMatrix,
    c: *const DqsMatrix,
    d: *const DqsMatrix,
    tol: *const DqsTolerance,
    mode: DqsMode,
    out: *mut *mut DqsOutcome,
) -> DqsStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let mode = match mode {
            DqsMode::Both => ConditionMode::Both,
            DqsMode::Projector => ConditionMode::Projector,
            DqsMode::Rank => ConditionMode::Rank,
        };
        let analysis = solve_dual_system(
            matrix(a, "A")?,
            matrix(b, "B")?,
            matrix(c, "C")?,
            matrix(d, "D")?,
            &tolerance(tol)?,
            mode,
        )?;
        *slot = boxed_outcome(analysis.outcome);
        Ok(())
    })
}

/// Solves `AX = B`.
///
/// # Safety
/// As for [`dqs_solve_system`].
#[no_mangle]
pub unsafe extern "C" fn dqs_solve_ax_b(
    a: *const DqsMatrix,
    b: *const DqsMatrix,
    tol: *const DqsTolerance,
    out: *mut *mut DqsOutcome,
) -> DqsStatus {
    guard(|| {
        let slot = out_slot(out)?;
        *slot = boxed_outcome(solve_ax_b(matrix(a, "A")?, matrix(b, "B")?, &tolerance(tol)?)?);
        Ok(())
    })
}

/// Solves `XC = D`.
///
/// # Safety
/// As for [`dqs_solve_system`].
#[no_mangle]
pub unsafe extern "C" fn dqs_solve_xc_d(
    c: *const DqsMatrix,
    d: *const DqsMatrix,
    tol: *const DqsTolerance,
    out: *mut *mut DqsOutcome,
) -> DqsStatus {
    guard(|| {
        let slot = out_slot(out)?;
        *slot = boxed_outcome(solve_xc_d(matrix(c, "C")?, matrix(d, "D")?, &tolerance(tol)?)?);
        Ok(())
    })
}

/// Solves `AX = B` for η-Hermitian `X`; `A` and `B` square, `B` η-Hermitian.
///
/// # Safety
/// As for [`dqs_solve_system`].
#[no_mangle]
pub unsafe extern "C" fn dqs_solve_ax_b_eta_hermitian(
    a: *const DqsMatrix,
    b: *const DqsMatrix,
    eta: DqsEta,
    tol: *const DqsTolerance,
    out: *mut *mut DqsOutcome,
) -> DqsStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let eta = match eta {
            DqsEta::I => EtaAxis::I,
            DqsEta::J => EtaAxis::J,
            DqsEta::K => EtaAxis::K,
        };
        let o = solve_ax_b_eta_hermitian(matrix(a, "A")?, matrix(b, "B")?, eta, &tolerance(tol)?)?;
        *slot = boxed_outcome(o);
        Ok(())
    })
}

/// 1 if solvable, 0 if not or if `o` is null.
///
/// # Safety
/// `o` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dqs_outcome_solvable(o: *const DqsOutcome) -> i32 {
    o.as_ref().map_or(0, |o| o.inner.solvable as i32)
}

/// Number of failed solvability conditions.
///
/// # Safety
/// `o` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dqs_outcome_failed_count(o: *const DqsOutcome) -> usize {
    o.as_ref().map_or(0, |o| o.failed.len())
}

/// Name of the `i`-th failed condition, or null when out of range. The
/// string is owned by the outcome.
///
/// # Safety
/// `o` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dqs_outcome_failed_name(o: *const DqsOutcome, i: usize) -> *const c_char {
    o.as_ref()
        .and_then(|o| o.failed.get(i))
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// The particular solution (all free parameters zero).
///
/// # Safety
/// `o` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dqs_outcome_particular(o: *const DqsOutcome, out: *mut *mut DqsMatrix) -> DqsStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let x = outcome(o)?.inner.particular.clone().ok_or_else(unsolvable)?;
        *slot = boxed(x);
        Ok(())
    })
}

/// A member of the general solution with free parameters drawn uniformly
/// from `[-scale, scale]` by a generator seeded with `seed`.
///
/// # Safety
/// `o` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dqs_outcome_sample(
    o: *const DqsOutcome,
    seed: u64,
    scale: f64,
    out: *mut *mut DqsMatrix,
) -> DqsStatus {
    guard(|| {
        let slot = out_slot(out)?;
        if !(scale.is_finite() && scale >= 0.0) {
            return Err(Failure(
                DqsStatus::InvalidArgument,
                format!("scale must be finite and non-negative, got {scale}"),
            ));
        }
        *slot = boxed(outcome(o)?.inner.sample(seed, scale).ok_or_else(unsolvable)?);
        Ok(())
    })
}

fn unsolvable() -> Failure {
    Failure(DqsStatus::Unsolvable, "system is unsolvable".into())
}

/// # Safety
/// `o` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dqs_outcome_free(o: *mut DqsOutcome) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Writes `‖AX − B‖` and `‖XC − D‖` (dual norm).
///
/// # Safety
/// Matrix arguments must be live handles; `ax_b` and `xc_d` writable.
#[no_mangle]
pub unsafe extern "C" fn dqs_verify_residual(
    a: *const DqsMatrix,
    b: *const DqsMatrix,
    c: *const DqsMatrix,
    d: *const DqsMatrix,
    x: *const DqsMatrix,
    ax_b: *mut f64,
    xc_d: *mut f64,
) -> DqsStatus {
    guard(|| {
        if ax_b.is_null() || xc_d.is_null() {
            return Err(null("residual output"));
        }
        let (r1, r2) = verify_residual(
            matrix(a, "A")?,
            matrix(b, "B")?,
            matrix(c, "C")?,
            matrix(d, "D")?,
            matrix(x, "X")?,
        )?;
        *ax_b = r1;
        *xc_d = r2;
        Ok(())
    })
}
