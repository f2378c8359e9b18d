//! The one-sided equations `AX = B` and `XC = D`, and η-Hermitian solutions
//! of `AX = B`.

use std::sync::Arc;

use crate::dual_matrix::DualQuatMatrix;
use crate::error::{Error, Result};
use crate::matrix::{block, Block, QuatMatrix, Tolerance};
use crate::quaternion::EtaAxis;
use crate::random::{uniform_matrix, ParamRng};

use super::outcome::{Check, RankReport, SolveOutcome};
use super::system::{solve_dual_system, ConditionMode};
use super::Ctx;

/// Solves `AX = B` for `A: m×n, B: m×k`.
///
/// With `B₁₁ = B₁ − A₁A₀†B₀`, `A₁₁ = A₁L_{A₀}`, `A₂ = R_{A₀}A₁₁`,
/// `C₂ = R_{A₀}B₁₁`, the equation is solvable iff `R_{A₀}B₀ = 0` and
/// `R_{A₂}C₂ = 0`. Solutions:
/// `X₀ = A₀†B₀ + L_{A₀}W`, `X₁ = A₀†(B₁₁ − A₁₁W) + L_{A₀}W₁`,
/// `W = A₂†C₂ + L_{A₂}W₂`. Samples draw `W₁` then `W₂`.
pub fn solve_ax_b(a: &DualQuatMatrix, b: &DualQuatMatrix, tol: &Tolerance) -> Result<SolveOutcome<DualQuatMatrix>> {
    tol.validate()?;
    if a.rows() != b.rows() {
        return Err(Error::ShapeMismatch {
            op: "AX = B: rows of A and B",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let ctx = Ctx::for_dual(tol, &[a, b]);
    let (a0, a1) = (a.std(), a.inf());
    let (b0, b1) = (b.std(), b.inf());
    let pa0 = ctx.proj(a0);
    let b11 = b1 - &(&(a1 * &pa0.pinv) * b0);
    let a11 = a1 * &pa0.l;
    let a2 = &pa0.r * &a11;
    let c2 = &pa0.r * &b11;
    let pa2 = ctx.proj(&a2);

    let checks = vec![
        ctx.zero_check("R_{A0}B0=0", &pa0.r * b0, b0.norm()),
        ctx.zero_check("R_{A2}C2=0", &pa2.r * &c2, c2.norm().max(b.norm()).max(b11.norm())),
    ];

    use Block::{Zero as Z, M};
    let r = |m: &QuatMatrix| ctx.rank(m);
    let ranks = vec![
        Check::rank("RC1", r(&a0.hstack(b0)?), r(a0)),
        Check::rank(
            "RC3",
            r(&block(&[&[M(a0), M(b1), M(a1)], &[Z, M(b0), M(a0)]])?),
            r(&block(&[&[M(a0), M(a1)], &[Z, M(a0)]])?),
        ),
    ];
    let report = RankReport {
        equalities: Vec::new(),
        ranks,
        projector: checks.clone(),
    };

    let (n, k) = (a.cols(), b.cols());
    let w_base = &pa2.pinv * &c2;
    let x0_base = &pa0.pinv * b0;
    let build = move |w1: Option<&QuatMatrix>, w2: Option<&QuatMatrix>| {
        let w = match w2 {
            Some(w2) => &w_base + &(&pa2.l * w2),
            None => w_base.clone(),
        };
        let x0 = &x0_base + &(&pa0.l * &w);
        let mut x1 = &pa0.pinv * &(&b11 - &(&a11 * &w));
        if let Some(w1) = w1 {
            x1 = &x1 + &(&pa0.l * w1);
        }
        DualQuatMatrix::new(x0, x1).expect("both parts are n x k")
    };
    let outcome = SolveOutcome::from_checks(checks, move || {
        let particular = build(None, None);
        let sampler = Arc::new(move |rng: &mut ParamRng, scale: f64| {
            let w1 = uniform_matrix(n, k, scale, rng);
            let w2 = uniform_matrix(n, k, scale, rng);
            build(Some(&w1), Some(&w2))
        });
        (particular, sampler as _)
    });
    Ok(outcome.with_rank_report(report))
}

/// Solves `XC = D` for `C: p×q, D: r×q`; the unknown is `r×p`.
///
/// With `D₁₁ = D₁ − D₀C₀†C₁`, `C₁₁ = R_{C₀}C₁`, `B₃ = C₁₁L_{C₀}`,
/// `C₃ = D₁₁L_{C₀}`, the equation is solvable iff `D₀L_{C₀} = 0` and
/// `C₃L_{B₃} = 0`. Solutions:
/// `X₀ = D₀C₀† + UR_{C₀}`, `X₁ = (D₁₁ − UC₁₁)C₀† + U₁R_{C₀}`,
/// `U = C₃B₃† + U₂R_{B₃}`. Samples draw `U₁` then `U₂`.
pub fn solve_xc_d(c: &DualQuatMatrix, d: &DualQuatMatrix, tol: &Tolerance) -> Result<SolveOutcome<DualQuatMatrix>> {
    tol.validate()?;
    if c.cols() != d.cols() {
        return Err(Error::ShapeMismatch {
            op: "XC = D: columns of C and D",
            left: c.shape(),
            right: d.shape(),
        });
    }
    let ctx = Ctx::for_dual(tol, &[c, d]);
    let (c0, c1) = (c.std(), c.inf());
    let (d0, d1) = (d.std(), d.inf());
    let pc0 = ctx.proj(c0);
    let d11 = d1 - &(&(d0 * &pc0.pinv) * c1);
    let c11 = &pc0.r * c1;
    let b3 = &c11 * &pc0.l;
    let c3 = &d11 * &pc0.l;
    let pb3 = ctx.proj(&b3);

    let checks = vec![
        ctx.zero_check("D0L_{C0}=0", d0 * &pc0.l, d0.norm()),
        ctx.zero_check("C3L_{B3}=0", &c3 * &pb3.l, c3.norm().max(d.norm()).max(d11.norm())),
    ];

    use Block::{Zero as Z, M};
    let r = |m: &QuatMatrix| ctx.rank(m);
    let ranks = vec![
        Check::rank("RC2", r(&c0.vstack(d0)?), r(c0)),
        Check::rank(
            "RC6",
            r(&block(&[&[M(c0), Z], &[M(d1), M(d0)], &[M(c1), M(c0)]])?),
            r(&block(&[&[M(c0), Z], &[M(c1), M(c0)]])?),
        ),
    ];
    let report = RankReport {
        equalities: Vec::new(),
        ranks,
        projector: checks.clone(),
    };

    let (rows, cols) = (d.rows(), c.rows());
    let u_base = &c3 * &pb3.pinv;
    let x0_base = d0 * &pc0.pinv;
    let build = move |u1: Option<&QuatMatrix>, u2: Option<&QuatMatrix>| {
        let u = match u2 {
            Some(u2) => &u_base + &(u2 * &pb3.r),
            None => u_base.clone(),
        };
        let x0 = &x0_base + &(&u * &pc0.r);
        let mut x1 = &(&d11 - &(&u * &c11)) * &pc0.pinv;
        if let Some(u1) = u1 {
            x1 = &x1 + &(u1 * &pc0.r);
        }
        DualQuatMatrix::new(x0, x1).expect("both parts are r x p")
    };
    let outcome = SolveOutcome::from_checks(checks, move || {
        let particular = build(None, None);
        let sampler = Arc::new(move |rng: &mut ParamRng, scale: f64| {
            let u1 = uniform_matrix(rows, cols, scale, rng);
            let u2 = uniform_matrix(rows, cols, scale, rng);
            build(Some(&u1), Some(&u2))
        });
        (particular, sampler as _)
    });
    Ok(outcome.with_rank_report(report))
}

/// η-Hermitian solutions of `AX = B` for square `A`, `B` with `B^{η*} = B`.
///
/// Solves `AX̃ = B, X̃A^{η*} = B` with [`solve_dual_system`] and returns
/// `X = (X̃ + X̃^{η*}) / 2`, part by part. The attached rank report is the
/// reduced system's, i.e. the condition set specialised to `C = A^{η*}`,
/// `D = B`.
pub fn solve_ax_b_eta_hermitian(
    a: &DualQuatMatrix,
    b: &DualQuatMatrix,
    eta: EtaAxis,
    tol: &Tolerance,
) -> Result<SolveOutcome<DualQuatMatrix>> {
    tol.validate()?;
    for (what, m) in [("A", a), ("B", b)] {
        if m.rows() != m.cols() {
            return Err(Error::NotSquare {
                what: if what == "A" { "coefficient matrix A" } else { "right-hand side B" },
                rows: m.rows(),
                cols: m.cols(),
            });
        }
    }
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            op: "AX = B with square A and B",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let residual = b.eta_hermitian_residual(eta)?;
    if !tol.negligible(residual, b.norm()) {
        return Err(Error::NotEtaHermitian { eta, residual });
    }

    let c = a.eta_conj_transpose(eta);
    let analysis = solve_dual_system(a, b, &c, b, tol, ConditionMode::Both)?;
    let report = analysis.report;
    let symmetrize = move |x: DualQuatMatrix| (&x + &x.eta_conj_transpose(eta)).scale(0.5);
    Ok(analysis.outcome.map(symmetrize).with_rank_report(report))
}
