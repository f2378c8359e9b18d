//! Solvers for quaternion and dual quaternion matrix equation systems.
//!
//! Every solver returns a [`SolveOutcome`]: the verdict, the named conditions
//! it was decided on, a canonical particular solution (all free parameters
//! zero) and a seeded generator of general solutions.
//!
//! Thresholds: an expression that must vanish passes when
//! `‖M‖ ≤ zero_abs · (1 + operand scale)`. Ranks and pseudoinverses inside a
//! solver cut singular values at `rank_rel · max(σ_max, (1 + s)²)`, where `s`
//! is the largest norm among the input matrices (or their parts), so that
//! intermediates which vanish in exact arithmetic get rank zero.

mod outcome;
mod pair;
mod special;
mod system;

pub use outcome::{Check, EqualityCheck, Measure, RankReport, SolveOutcome};
pub use pair::{solve_coupled_system, solve_two_sided_pair, CoupledSolution};
pub use special::{solve_ax_b, solve_ax_b_eta_hermitian, solve_xc_d};
pub use system::{rank_report, solve_dual_system, ConditionMode, DualSystemAnalysis, IntermediateLedger};

use crate::dual_matrix::DualQuatMatrix;
use crate::error::Result;
use crate::matrix::{Projectors, QuatMatrix, Tolerance};

/// Tolerance with the scale floor fixed for one problem instance.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Ctx {
    pub tol: Tolerance,
}

impl Ctx {
    pub fn for_inputs(tol: &Tolerance, inputs: &[&QuatMatrix]) -> Self {
        let s = inputs.iter().map(|m| m.norm()).fold(0.0f64, f64::max);
        let floor = (1.0 + s) * (1.0 + s);
        Self {
            tol: tol.with_scale_floor(tol.scale_floor.max(floor)),
        }
    }

    pub fn for_dual(tol: &Tolerance, inputs: &[&DualQuatMatrix]) -> Self {
        let parts: Vec<&QuatMatrix> = inputs.iter().flat_map(|m| [m.std(), m.inf()]).collect();
        Self::for_inputs(tol, &parts)
    }

    pub fn proj(&self, a: &QuatMatrix) -> Projectors {
        Projectors::new(a, &self.tol)
    }

    pub fn rank(&self, a: &QuatMatrix) -> usize {
        a.rank(&self.tol)
    }

    pub fn zero_check(&self, name: &'static str, m: QuatMatrix, operand_scale: f64) -> Check {
        Check::norm(name, m.norm(), self.tol.threshold(operand_scale))
    }
}

/// `‖AX − B‖` with the dual norm.
pub fn residual_ax(a: &DualQuatMatrix, x: &DualQuatMatrix, b: &DualQuatMatrix) -> Result<f64> {
    Ok(a.matmul(x)?.try_sub(b)?.norm())
}

/// `‖XC − D‖` with the dual norm.
pub fn residual_xc(x: &DualQuatMatrix, c: &DualQuatMatrix, d: &DualQuatMatrix) -> Result<f64> {
    Ok(x.matmul(c)?.try_sub(d)?.norm())
}

/// `(‖AX − B‖, ‖XC − D‖)`; a pure measurement.
pub fn verify_residual(
    a: &DualQuatMatrix,
    b: &DualQuatMatrix,
    c: &DualQuatMatrix,
    d: &DualQuatMatrix,
    x: &DualQuatMatrix,
) -> Result<(f64, f64)> {
    Ok((residual_ax(a, x, b)?, residual_xc(x, c, d)?))
}
