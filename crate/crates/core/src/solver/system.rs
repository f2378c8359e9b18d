//! The dual quaternion system `AX = B, XC = D`.
//!
//! Splitting `X = X₀ + X₁ε` turns the system into
//! `A₀X₀ = B₀, X₀C₀ = D₀` and `A₀X₁ + A₁X₀ = B₁, X₀C₁ + X₁C₀ = D₁`.
//! The first pair fixes `X₀ = X₀' + L_{A₀}UR_{C₀}` with
//! `X₀' = A₀†B₀ + L_{A₀}D₀C₀†`; substituting into the second pair gives a
//! coupled system in `(X₁, U)`, solved by [`CoupledSystem`].

use std::str::FromStr;
use std::sync::Arc;

use crate::dual_matrix::DualQuatMatrix;
use crate::error::{Error, Result};
use crate::matrix::{block, Block, Projectors, QuatMatrix, Tolerance};
use crate::random::ParamRng;

use super::outcome::{Check, EqualityCheck, RankReport, SolveOutcome};
use super::pair::CoupledSystem;
use super::Ctx;

/// Which condition family decides solvability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConditionMode {
    Projector,
    Rank,
    /// Evaluate both and fail hard if they disagree.
    #[default]
    Both,
}

impl FromStr for ConditionMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "projector" => Ok(Self::Projector),
            "rank" => Ok(Self::Rank),
            "both" => Ok(Self::Both),
            other => Err(format!("unknown mode `{other}`, expected projector, rank or both")),
        }
    }
}

/// Named intermediates of the solver, for `A: m×n, B: m×k, C: k×l, D: n×l`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntermediateLedger {
    pub b11: QuatMatrix,
    pub d11: QuatMatrix,
    pub a11: QuatMatrix,
    pub c11: QuatMatrix,
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
}

impl IntermediateLedger {
    pub fn entries(&self) -> [(&'static str, &QuatMatrix); 15] {
        [
            ("B11", &self.b11),
            ("D11", &self.d11),
            ("A11", &self.a11),
            ("C11", &self.c11),
            ("A2", &self.a2),
            ("B2", &self.b2),
            ("C2", &self.c2),
            ("A3", &self.a3),
            ("B3", &self.b3),
            ("C3", &self.c3),
            ("A00", &self.a00),
            ("B00", &self.b00),
            ("C00", &self.c00),
            ("D00", &self.d00),
            ("Phi", &self.phi),
        ]
    }

    /// Expected shape of every entry for the given problem dimensions.
    pub fn expected_shapes(m: usize, n: usize, k: usize, l: usize) -> [(&'static str, (usize, usize)); 15] {
        [
            ("B11", (m, k)),
            ("D11", (n, l)),
            ("A11", (m, n)),
            ("C11", (k, l)),
            ("A2", (m, n)),
            ("B2", (k, k)),
            ("C2", (m, k)),
            ("A3", (n, n)),
            ("B3", (k, l)),
            ("C3", (n, l)),
            ("A00", (n, n)),
            ("B00", (k, l)),
            ("C00", (n, l)),
            ("D00", (n, n)),
            ("Phi", (n, k)),
        ]
    }

    pub fn shapes_consistent(&self, m: usize, n: usize, k: usize, l: usize) -> bool {
        self.entries()
            .iter()
            .zip(Self::expected_shapes(m, n, k, l))
            .all(|((_, mat), (_, shape))| mat.shape() == shape)
    }
}

/// Everything `solve_dual_system` produces.
#[derive(Debug, Clone)]
pub struct DualSystemAnalysis {
    pub outcome: SolveOutcome<DualQuatMatrix>,
    pub report: RankReport,
    pub ledger: IntermediateLedger,
}

fn validate(a: &DualQuatMatrix, b: &DualQuatMatrix, c: &DualQuatMatrix, d: &DualQuatMatrix) -> Result<()> {
    let (m, n) = a.shape();
    let mismatch = |op, l: &DualQuatMatrix, r: &DualQuatMatrix| Error::ShapeMismatch {
        op,
        left: l.shape(),
        right: r.shape(),
    };
    if b.rows() != m {
        return Err(mismatch("AX = B: rows of A and B", a, b));
    }
    let k = b.cols();
    if c.rows() != k {
        return Err(mismatch("X is n x k: columns of B vs rows of C", b, c));
    }
    let l = c.cols();
    if d.shape() != (n, l) {
        return Err(mismatch("XC = D: D must be n x l", d, c));
    }
    Ok(())
}

struct DualSystem {
    a0: QuatMatrix,
    a1: QuatMatrix,
    b0: QuatMatrix,
    b1: QuatMatrix,
    c0: QuatMatrix,
    c1: QuatMatrix,
    d0: QuatMatrix,
    d1: QuatMatrix,
    /// `A₀†B₀ + L_{A₀}D₀C₀†`
    x0_base: QuatMatrix,
    coupled: CoupledSystem,
}

impl DualSystem {
    fn build(ctx: &Ctx, a: &DualQuatMatrix, b: &DualQuatMatrix, c: &DualQuatMatrix, d: &DualQuatMatrix) -> Self {
        let (a0, a1) = a.clone().into_parts();
        let (b0, b1) = b.clone().into_parts();
        let (c0, c1) = c.clone().into_parts();
        let (d0, d1) = d.clone().into_parts();
        let pa0: Projectors = ctx.proj(&a0);
        let pc0: Projectors = ctx.proj(&c0);

        let x0_base = &(&pa0.pinv * &b0) + &(&(&pa0.l * &d0) * &pc0.pinv);
        let b11 = &b1 - &(&a1 * &x0_base);
        let d11 = &d1 - &(&x0_base * &c1);
        let a11 = &a1 * &pa0.l;
        let c11 = &pc0.r * &c1;

        let rhs_scale = [&b0, &b1, &d0, &d1].iter().map(|m| m.norm()).fold(0.0, f64::max);
        let coupled = CoupledSystem::build(
            ctx,
            rhs_scale,
            (a0.clone(), Some(pa0)),
            a11,
            b11,
            (c0.clone(), Some(pc0)),
            c11,
            d11,
        );
        Self {
            a0,
            a1,
            b0,
            b1,
            c0,
            c1,
            d0,
            d1,
            x0_base,
            coupled,
        }
    }

    fn ledger(&self) -> IntermediateLedger {
        let cs = &self.coupled;
        let p = &cs.pair;
        IntermediateLedger {
            b11: cs.b.clone(),
            d11: cs.d.clone(),
            a11: cs.a1.clone(),
            c11: cs.c1.clone(),
            a2: p.a2.clone(),
            b2: p.b2.clone(),
            c2: p.c2.clone(),
            a3: p.a3.clone(),
            b3: p.b3.clone(),
            c3: p.c3.clone(),
            a00: p.a00.clone(),
            b00: p.b00.clone(),
            c00: p.c00.clone(),
            d00: p.d00.clone(),
            phi: p.phi.clone(),
        }
    }

    /// `X₀ = X₀' + L_{A₀}UR_{C₀}`, `X₁` from the coupled system with `Y = U`.
    fn assemble(&self, u: &QuatMatrix, x1: QuatMatrix) -> DualQuatMatrix {
        let cs = &self.coupled;
        let x0 = &self.x0_base + &(&(&cs.pa.l * u) * &cs.pc.r);
        DualQuatMatrix::new(x0, x1).expect("X0 and X1 share the n x k shape")
    }

    fn particular(&self) -> DualQuatMatrix {
        let sol = self.coupled.particular();
        self.assemble(&sol.y, sol.x)
    }

    /// Draws `U₁` and then `U₂..U₅`.
    fn sample(&self, rng: &mut ParamRng, scale: f64) -> DualQuatMatrix {
        let sol = self.coupled.sample(rng, scale);
        self.assemble(&sol.y, sol.x)
    }

    fn projector_checks(&self, ctx: &Ctx) -> Vec<Check> {
        let cs = &self.coupled;
        let mut out = vec![
            ctx.zero_check("R_{A0}B0=0", &cs.pa.r * &self.b0, self.b0.norm()),
            ctx.zero_check("D0L_{C0}=0", &self.d0 * &cs.pc.l, self.d0.norm()),
        ];
        out.extend(cs.pair.checks.iter().cloned());
        out
    }

    fn equalities(&self, ctx: &Ctx) -> Vec<EqualityCheck> {
        let (a0, a1, b0, b1, c0, c1, d0, d1) = (
            &self.a0, &self.a1, &self.b0, &self.b1, &self.c0, &self.c1, &self.d0, &self.d1,
        );
        let eq1 = EqualityCheck::new(
            "EQ-AD=BC",
            a0 * d0,
            b0 * c0,
            ctx.tol.threshold(a0.norm() * d0.norm() + b0.norm() * c0.norm()),
        );
        let eq2 = EqualityCheck::new(
            "EQ-DUALCOMPAT",
            &(a0 * d1) - &(b0 * c1),
            &(b1 * c0) - &(a1 * d0),
            ctx.tol.threshold(
                a0.norm() * d1.norm() + b0.norm() * c1.norm() + b1.norm() * c0.norm() + a1.norm() * d0.norm(),
            ),
        );
        vec![eq1, eq2]
    }

    fn rank_checks(&self, ctx: &Ctx) -> Vec<Check> {
        let (a0, a1, b0, b1, c0, c1, d0, d1) = (
            &self.a0, &self.a1, &self.b0, &self.b1, &self.c0, &self.c1, &self.d0, &self.d1,
        );
        let r = |m: &QuatMatrix| ctx.rank(m);
        let blk = |g: &[&[Block<'_>]]| block(g).expect("block shapes follow from validated inputs");
        use Block::{Zero as Z, M};

        let r_a0 = r(a0);
        let r_c0 = r(c0);

        let rc1 = Check::rank("RC1", r(&blk(&[&[M(a0), M(b0)]])), r_a0);
        let rc2 = Check::rank("RC2", r(&blk(&[&[M(c0)], &[M(d0)]])), r_c0);
        let rc3 = Check::rank(
            "RC3",
            r(&blk(&[&[M(a0), M(b1), M(a1)], &[Z, M(b0), M(a0)]])),
            r(&blk(&[&[M(a0), M(a1)], &[Z, M(a0)]])),
        );
        let a1d0_b1c0 = &(a1 * d0) - &(b1 * c0);
        let rc4 = Check::rank("RC4", r(&blk(&[&[M(a0), M(&a1d0_b1c0)]])), r_a0);
        let b0c1_a0d1 = &(b0 * c1) - &(a0 * d1);
        let rc5 = Check::rank("RC5", r(&blk(&[&[M(c0)], &[M(&b0c1_a0d1)]])), r_c0);
        let rc6 = Check::rank(
            "RC6",
            r(&blk(&[&[M(c0), Z], &[M(d1), M(d0)], &[M(c1), M(c0)]])),
            r(&blk(&[&[M(c0), Z], &[M(c1), M(c0)]])),
        );
        let b1c1_a1d1 = &(b1 * c1) - &(a1 * d1);
        let b1c0_a1d0 = &(b1 * c0) - &(a1 * d0);
        let rc7 = Check::rank(
            "RC7",
            r(&blk(&[
                &[M(&b1c1_a1d1), M(a0), M(&b1c0_a1d0)],
                &[M(c0), Z, Z],
                &[M(&b0c1_a0d1), Z, Z],
            ])),
            r_a0 + r_c0,
        );
        vec![rc1, rc2, rc3, rc4, rc5, rc6, rc7]
    }

    fn report(&self, ctx: &Ctx) -> RankReport {
        RankReport {
            equalities: self.equalities(ctx),
            ranks: self.rank_checks(ctx),
            projector: self.projector_checks(ctx),
        }
    }
}

fn analyze(
    a: &DualQuatMatrix,
    b: &DualQuatMatrix,
    c: &DualQuatMatrix,
    d: &DualQuatMatrix,
    tol: &Tolerance,
) -> Result<(Ctx, DualSystem, RankReport)> {
    tol.validate()?;
    validate(a, b, c, d)?;
    let ctx = Ctx::for_dual(tol, &[a, b, c, d]);
    let sys = DualSystem::build(&ctx, a, b, c, d);
    let report = sys.report(&ctx);
    Ok((ctx, sys, report))
}

/// Decides solvability of `AX = B, XC = D` over the dual quaternions and
/// constructs its solutions.
///
/// Shapes: `A: m×n, B: m×k, C: k×l, D: n×l`; the unknown is `n×k`.
/// The returned report always carries both condition families; `mode`
/// chooses which one decides. With [`ConditionMode::Both`] a disagreement
/// is an error.
pub fn solve_dual_system(
    a: &DualQuatMatrix,
    b: &DualQuatMatrix,
    c: &DualQuatMatrix,
    d: &DualQuatMatrix,
    tol: &Tolerance,
    mode: ConditionMode,
) -> Result<DualSystemAnalysis> {
    let (_ctx, sys, report) = analyze(a, b, c, d, tol)?;
    let ledger = sys.ledger();
    debug_assert!(ledger.shapes_consistent(a.rows(), a.cols(), b.cols(), c.cols()));

    let projector = report.projector_verdict();
    let rank = report.rank_verdict();
    if mode == ConditionMode::Both && projector != rank {
        return Err(Error::ConditionFamilyDisagreement { projector, rank });
    }

    // equalities, then (3.1)-type, then the rest, per family
    let eq_failed: Vec<String> = report.failed_equalities().map(str::to_string).collect();
    let failing = |checks: &[Check]| -> Vec<String> {
        checks.iter().filter(|c| !c.pass).map(|c| c.name.to_string()).collect()
    };
    let proj_failed = failing(&report.projector);
    let rank_failed = failing(&report.ranks);
    let early = |names: &[String], firsts: &[&str]| {
        let (first, rest): (Vec<String>, Vec<String>) = names.iter().cloned().partition(|n| firsts.contains(&n.as_str()));
        (first, rest)
    };
    let (p_early, p_late) = early(&proj_failed, &["R_{A0}B0=0", "D0L_{C0}=0"]);
    let (r_early, r_late) = early(&rank_failed, &["RC1", "RC2"]);

    let eq_checks = report
        .equalities
        .iter()
        .map(|e| Check::norm(e.name, e.residual, e.threshold));
    let (solvable, failed, checks) = match mode {
        ConditionMode::Projector => (
            projector,
            [p_early, eq_failed, p_late].concat(),
            report.projector.iter().cloned().chain(eq_checks).collect::<Vec<_>>(),
        ),
        ConditionMode::Rank => (
            rank,
            [r_early, eq_failed, r_late].concat(),
            report.ranks.iter().cloned().chain(eq_checks).collect(),
        ),
        ConditionMode::Both => (
            projector,
            [p_early, r_early, eq_failed, p_late, r_late].concat(),
            report
                .projector
                .iter()
                .cloned()
                .chain(eq_checks)
                .chain(report.ranks.iter().cloned())
                .collect(),
        ),
    };

    let outcome = if solvable {
        let sys = Arc::new(sys);
        let particular = sys.particular();
        SolveOutcome::solved(
            checks,
            particular,
            Arc::new(move |rng: &mut ParamRng, scale: f64| sys.sample(rng, scale)),
        )
    } else {
        SolveOutcome::unsolvable(checks, failed)
    };
    Ok(DualSystemAnalysis { outcome, report, ledger })
}

/// Both condition families for `AX = B, XC = D`, blocks assembled literally.
pub fn rank_report(
    a: &DualQuatMatrix,
    b: &DualQuatMatrix,
    c: &DualQuatMatrix,
    d: &DualQuatMatrix,
    tol: &Tolerance,
) -> Result<RankReport> {
    analyze(a, b, c, d, tol).map(|(_, _, report)| report)
}
