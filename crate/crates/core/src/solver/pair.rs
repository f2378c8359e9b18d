//! The two-sided pair `A₂YB₂ = C₂, A₃YB₃ = C₃` and the coupled system
//! `AX + A₁YR_C = B, XC + L_AYC₁ = D` built on top of it.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::{Projectors, QuatMatrix, Tolerance};
use crate::random::{uniform_matrix, ParamRng};

use super::outcome::{Check, SolveOutcome};
use super::Ctx;

fn need(op: &'static str, ok: bool, l: &QuatMatrix, r: &QuatMatrix) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            op,
            left: l.shape(),
            right: r.shape(),
        })
    }
}

/// All intermediate quantities of the two-sided pair solver.
#[derive(Debug, Clone)]
pub(crate) struct PairSystem {
    pub a2: QuatMatrix,
    pub b2: QuatMatrix,
    pub c2: QuatMatrix,
    pub a3: QuatMatrix,
    pub b3: QuatMatrix,
    pub c3: QuatMatrix,
    pub a00: QuatMatrix,
    pub b00: QuatMatrix,
    pub c00: QuatMatrix,
    pub d00: QuatMatrix,
    pub phi: QuatMatrix,
    pub checks: Vec<Check>,
    l_a2: QuatMatrix,
    l_a00: QuatMatrix,
    r_b00: QuatMatrix,
    r_b2: QuatMatrix,
    r_b3: QuatMatrix,
    l_a3: QuatMatrix,
}

impl PairSystem {
    pub fn validate(
        a2: &QuatMatrix,
        b2: &QuatMatrix,
        c2: &QuatMatrix,
        a3: &QuatMatrix,
        b3: &QuatMatrix,
        c3: &QuatMatrix,
    ) -> Result<()> {
        need("pair: A2, A3 columns", a2.cols() == a3.cols(), a2, a3)?;
        need("pair: B2, B3 rows", b2.rows() == b3.rows(), b2, b3)?;
        need("pair: A2 Y B2 = C2 rows", a2.rows() == c2.rows(), a2, c2)?;
        need("pair: A2 Y B2 = C2 columns", b2.cols() == c2.cols(), b2, c2)?;
        need("pair: A3 Y B3 = C3 rows", a3.rows() == c3.rows(), a3, c3)?;
        need("pair: A3 Y B3 = C3 columns", b3.cols() == c3.cols(), b3, c3)?;
        Ok(())
    }

    /// Shapes must already be validated. Each check's operand scale is at
    /// least `rhs_scale`, the size of the right-hand sides `C₂`, `C₃` were
    /// derived from; those intermediates may vanish by cancellation.
    pub fn build(
        ctx: &Ctx,
        rhs_scale: f64,
        a2: QuatMatrix,
        b2: QuatMatrix,
        c2: QuatMatrix,
        a3: QuatMatrix,
        b3: QuatMatrix,
        c3: QuatMatrix,
    ) -> Self {
        let pa2 = ctx.proj(&a2);
        let pb2 = ctx.proj(&b2);
        let pa3 = ctx.proj(&a3);
        let pb3 = ctx.proj(&b3);

        let a00 = &a3 * &pa2.l;
        let b00 = &pb2.r * &b3;
        // C₀₀ = C₃ − A₃A₂†C₂B₂†B₃
        let y2 = &(&pa2.pinv * &c2) * &pb2.pinv;
        let c00 = &c3 - &(&(&a3 * &y2) * &b3);
        let pa00 = ctx.proj(&a00);
        let d00 = &pa00.r * &a3;
        let pb00 = ctx.proj(&b00);
        let pd00 = ctx.proj(&d00);

        // Φ = A₂†C₂B₂† + L_{A₂}A₀₀†C₀₀B₃† − L_{A₂}A₀₀†A₃D₀₀†R_{A₀₀}C₀₀B₃†
        //     + D₀₀†R_{A₀₀}C₀₀B₀₀†R_{B₂}
        let r_c00 = &pa00.r * &c00;
        let t1 = y2;
        let t2 = &(&(&pa2.l * &pa00.pinv) * &c00) * &pb3.pinv;
        let t3 = &(&(&(&(&pa2.l * &pa00.pinv) * &a3) * &pd00.pinv) * &r_c00) * &pb3.pinv;
        let t4 = &(&(&pd00.pinv * &r_c00) * &pb00.pinv) * &pb2.r;
        let phi = &(&(&t1 + &t2) - &t3) + &t4;

        let (s2, s3) = (c2.norm().max(rhs_scale), c3.norm().max(rhs_scale));
        let checks = vec![
            ctx.zero_check("R_{A2}C2=0", &pa2.r * &c2, s2),
            ctx.zero_check("C2L_{B2}=0", &c2 * &pb2.l, s2),
            ctx.zero_check("R_{A3}C3=0", &pa3.r * &c3, s3),
            ctx.zero_check("C3L_{B3}=0", &c3 * &pb3.l, s3),
            ctx.zero_check("R_{A00}C00L_{B00}=0", &r_c00 * &pb00.l, c00.norm().max(s2).max(s3)),
        ];

        Self {
            l_a2: pa2.l,
            l_a00: pa00.l,
            r_b00: pb00.r,
            r_b2: pb2.r,
            r_b3: pb3.r,
            l_a3: pa3.l,
            a2,
            b2,
            c2,
            a3,
            b3,
            c3,
            a00,
            b00,
            c00,
            d00,
            phi,
            checks,
        }
    }

    /// Shape of `Y` and of every free parameter `W₁..W₄`.
    pub fn unknown_shape(&self) -> (usize, usize) {
        (self.a2.cols(), self.b2.rows())
    }

    /// `Y = Φ + L_{A₂}L_{A₀₀}W₁ + W₂R_{B₀₀}R_{B₂} + L_{A₂}W₃R_{B₃} + L_{A₃}W₄R_{B₂}`.
    pub fn general(&self, w: [&QuatMatrix; 4]) -> QuatMatrix {
        let t1 = &(&self.l_a2 * &self.l_a00) * w[0];
        let t2 = &(w[1] * &self.r_b00) * &self.r_b2;
        let t3 = &(&self.l_a2 * w[2]) * &self.r_b3;
        let t4 = &(&self.l_a3 * w[3]) * &self.r_b2;
        &(&(&(&self.phi + &t1) + &t2) + &t3) + &t4
    }

    /// Draws `W₁..W₄` in order and assembles `Y`.
    pub fn sample(&self, rng: &mut ParamRng, scale: f64) -> QuatMatrix {
        let (r, c) = self.unknown_shape();
        let w: Vec<QuatMatrix> = (0..4).map(|_| uniform_matrix(r, c, scale, rng)).collect();
        self.general([&w[0], &w[1], &w[2], &w[3]])
    }
}

/// Solves `A₂YB₂ = C₂, A₃YB₃ = C₃` for a common `Y`.
///
/// Solvable iff `R_{A₂}C₂`, `C₂L_{B₂}`, `R_{A₃}C₃`, `C₃L_{B₃}` and
/// `R_{A₀₀}C₀₀L_{B₀₀}` vanish, with `A₀₀ = A₃L_{A₂}`, `B₀₀ = R_{B₂}B₃`,
/// `C₀₀ = C₃ − A₃A₂†C₂B₂†B₃`. The particular solution is `Φ`; samples add
/// `L_{A₂}L_{A₀₀}W₁ + W₂R_{B₀₀}R_{B₂} + L_{A₂}W₃R_{B₃} + L_{A₃}W₄R_{B₂}`.
pub fn solve_two_sided_pair(
    a2: &QuatMatrix,
    b2: &QuatMatrix,
    c2: &QuatMatrix,
    a3: &QuatMatrix,
    b3: &QuatMatrix,
    c3: &QuatMatrix,
    tol: &Tolerance,
) -> Result<SolveOutcome<QuatMatrix>> {
    tol.validate()?;
    PairSystem::validate(a2, b2, c2, a3, b3, c3)?;
    let ctx = Ctx::for_inputs(tol, &[a2, b2, c2, a3, b3, c3]);
    let sys = PairSystem::build(&ctx, 0.0, a2.clone(), b2.clone(), c2.clone(), a3.clone(), b3.clone(), c3.clone());
    let checks = sys.checks.clone();
    Ok(SolveOutcome::from_checks(checks, move || {
        let sys = Arc::new(sys);
        let particular = sys.phi.clone();
        (particular, Arc::new(move |rng: &mut ParamRng, scale: f64| sys.sample(rng, scale)))
    }))
}

/// `(X, Y)` solving the coupled system.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledSolution {
    pub x: QuatMatrix,
    pub y: QuatMatrix,
}

/// Intermediates of the coupled system
/// `AX + A₁YR_C = B, XC + L_AYC₁ = D`.
#[derive(Debug, Clone)]
pub(crate) struct CoupledSystem {
    pub a: QuatMatrix,
    pub b: QuatMatrix,
    pub c: QuatMatrix,
    pub c1: QuatMatrix,
    pub d: QuatMatrix,
    pub a1: QuatMatrix,
    pub pa: Projectors,
    pub pc: Projectors,
    pub pair: PairSystem,
    pub compat: Check,
}

impl CoupledSystem {
    pub fn validate(
        a: &QuatMatrix,
        a1: &QuatMatrix,
        b: &QuatMatrix,
        c: &QuatMatrix,
        c1: &QuatMatrix,
        d: &QuatMatrix,
    ) -> Result<()> {
        need("coupled: A, A1 shapes", a.shape() == a1.shape(), a, a1)?;
        need("coupled: C, C1 shapes", c.shape() == c1.shape(), c, c1)?;
        need("coupled: AX = B rows", a.rows() == b.rows(), a, b)?;
        need("coupled: X C columns of B vs rows of C", b.cols() == c.rows(), b, c)?;
        need("coupled: XC = D rows", d.rows() == a.cols(), d, a)?;
        need("coupled: XC = D columns", d.cols() == c.cols(), d, c)?;
        Ok(())
    }

    /// Shapes must already be validated. `rhs_scale` as for
    /// [`PairSystem::build`]; `‖B‖` and `‖D‖` are always included.
    pub fn build(
        ctx: &Ctx,
        rhs_scale: f64,
        (a, pa): (QuatMatrix, Option<Projectors>),
        a1: QuatMatrix,
        b: QuatMatrix,
        (c, pc): (QuatMatrix, Option<Projectors>),
        c1: QuatMatrix,
        d: QuatMatrix,
    ) -> Self {
        let pa = pa.unwrap_or_else(|| ctx.proj(&a));
        let pc = pc.unwrap_or_else(|| ctx.proj(&c));
        let ad = &a * &d;
        let bc = &b * &c;
        let compat = Check::norm(
            "AD=BC",
            (&ad - &bc).norm(),
            ctx.tol.threshold(a.norm() * d.norm() + b.norm() * c.norm()),
        );
        // A₂ = R_AA₁, B₂ = R_C, C₂ = R_AB, A₃ = L_A, B₃ = C₁L_C, C₃ = DL_C
        let a2 = &pa.r * &a1;
        let b2 = pc.r.clone();
        let c2 = &pa.r * &b;
        let a3 = pa.l.clone();
        let b3 = &c1 * &pc.l;
        let c3 = &d * &pc.l;
        let rhs_scale = rhs_scale.max(b.norm()).max(d.norm());
        let pair = PairSystem::build(ctx, rhs_scale, a2, b2, c2, a3, b3, c3);
        Self {
            a,
            b,
            c,
            c1,
            d,
            a1,
            pa,
            pc,
            pair,
            compat,
        }
    }

    pub fn checks(&self) -> Vec<Check> {
        let mut out = vec![self.compat.clone()];
        out.extend(self.pair.checks.iter().cloned());
        out
    }

    /// `X = A†(B − A₁YR_C) + L_A(D − L_AYC₁)C† + L_AU₁R_C`.
    pub fn x_for(&self, y: &QuatMatrix, u1: Option<&QuatMatrix>) -> QuatMatrix {
        let left = &self.b - &(&(&self.a1 * y) * &self.pc.r);
        let right = &self.d - &(&(&self.pa.l * y) * &self.c1);
        let mut x = &(&self.pa.pinv * &left) + &(&(&self.pa.l * &right) * &self.pc.pinv);
        if let Some(u1) = u1 {
            x = &x + &(&(&self.pa.l * u1) * &self.pc.r);
        }
        x
    }

    /// Shape of `X`, `Y` and every free parameter.
    pub fn unknown_shape(&self) -> (usize, usize) {
        (self.a.cols(), self.c.rows())
    }

    pub fn particular(&self) -> CoupledSolution {
        let y = self.pair.phi.clone();
        let x = self.x_for(&y, None);
        CoupledSolution { x, y }
    }

    /// Draws `U₁`, then `U₂..U₅` for `Y`.
    pub fn sample(&self, rng: &mut ParamRng, scale: f64) -> CoupledSolution {
        let (r, c) = self.unknown_shape();
        let u1 = uniform_matrix(r, c, scale, rng);
        let y = self.pair.sample(rng, scale);
        let x = self.x_for(&y, Some(&u1));
        CoupledSolution { x, y }
    }
}

/// Solves `AX + A₁YR_C = B, XC + L_AYC₁ = D` for `(X, Y)`.
///
/// Solvable iff `AD = BC` and the pair conditions hold for `A₂ = R_AA₁`,
/// `B₂ = R_C`, `C₂ = R_AB`, `A₃ = L_A`, `B₃ = C₁L_C`, `C₃ = DL_C`.
pub fn solve_coupled_system(
    a: &QuatMatrix,
    a1: &QuatMatrix,
    b: &QuatMatrix,
    c: &QuatMatrix,
    c1: &QuatMatrix,
    d: &QuatMatrix,
    tol: &Tolerance,
) -> Result<SolveOutcome<CoupledSolution>> {
    tol.validate()?;
    CoupledSystem::validate(a, a1, b, c, c1, d)?;
    let ctx = Ctx::for_inputs(tol, &[a, a1, b, c, c1, d]);
    let sys = CoupledSystem::build(
        &ctx,
        0.0,
        (a.clone(), None),
        a1.clone(),
        b.clone(),
        (c.clone(), None),
        c1.clone(),
        d.clone(),
    );
    Ok(SolveOutcome::from_checks(sys.checks(), move || {
        let sys = Arc::new(sys);
        let particular = sys.particular();
        (particular, Arc::new(move |rng: &mut ParamRng, scale: f64| sys.sample(rng, scale)))
    }))
}
