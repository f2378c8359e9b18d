//! Quaternion and dual quaternion matrix algebra, with an exact solver for
//! the dual quaternion system `AX = B, XC = D`.
//!
//! * [`quaternion`]: scalars, conjugation and the η-involutions `q ↦ −η q* η`.
//! * [`matrix`]: dense quaternion matrices with rank, Moore–Penrose inverse
//!   and the projectors `L_A`, `R_A`, all through the complex adjoint.
//! * [`dual_matrix`]: `A₀ + A₁ε` with `ε² = 0`.
//! * [`solver`]: solvability conditions (projector and rank forms) and general
//!   solutions for `AX = B, XC = D`, its one-sided cases and η-Hermitian
//!   solutions of `AX = B`.
//! * [`format`]: the `.dqm` text format used by the `dqsolve` binary.

pub mod cli;
pub mod dual_matrix;
pub mod error;
pub mod format;
pub mod matrix;
pub mod quaternion;
pub mod random;
pub mod solver;

pub use dual_matrix::DualQuatMatrix;
pub use error::{Error, Result};
pub use matrix::{marsaglia_styan_check, QuatMatrix, Tolerance};
pub use quaternion::{DualQuaternion, EtaAxis, Quaternion};
pub use solver::{
    rank_report, solve_ax_b, solve_ax_b_eta_hermitian, solve_coupled_system, solve_dual_system, solve_two_sided_pair,
    solve_xc_d, verify_residual, ConditionMode, RankReport, SolveOutcome,
};
