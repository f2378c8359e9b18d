//! Matrices over the dual quaternions, `A = A₀ + A₁ε`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::matrix::{QuatMatrix, Tolerance};
use crate::quaternion::{DualQuaternion, EtaAxis};

/// A pair of same-shaped quaternion matrices with ε-truncated arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct DualQuatMatrix {
    std: QuatMatrix,
    inf: QuatMatrix,
}

impl DualQuatMatrix {
    pub fn new(std: QuatMatrix, inf: QuatMatrix) -> Result<Self> {
        if std.shape() != inf.shape() {
            return Err(Error::ShapeMismatch {
                op: "dual matrix parts",
                left: std.shape(),
                right: inf.shape(),
            });
        }
        Ok(Self { std, inf })
    }

    /// `A₀ + 0ε`.
    pub fn from_std(std: QuatMatrix) -> Self {
        let inf = QuatMatrix::zeros(std.rows(), std.cols());
        Self { std, inf }
    }

    /// `0 + A₁ε`.
    pub fn from_inf(inf: QuatMatrix) -> Self {
        let std = QuatMatrix::zeros(inf.rows(), inf.cols());
        Self { std, inf }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_std(QuatMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_std(QuatMatrix::identity(n))
    }

    pub fn from_entries(rows: usize, cols: usize, entries: &[DualQuaternion]) -> Result<Self> {
        let std = QuatMatrix::new(rows, cols, entries.iter().map(|d| d.std).collect())?;
        let inf = QuatMatrix::new(rows, cols, entries.iter().map(|d| d.inf).collect())?;
        Ok(Self { std, inf })
    }

    pub fn std(&self) -> &QuatMatrix {
        &self.std
    }

    pub fn inf(&self) -> &QuatMatrix {
        &self.inf
    }

    pub fn into_parts(self) -> (QuatMatrix, QuatMatrix) {
        (self.std, self.inf)
    }

    pub fn rows(&self) -> usize {
        self.std.rows()
    }

    pub fn cols(&self) -> usize {
        self.std.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.std.shape()
    }

    pub fn get(&self, r: usize, c: usize) -> Option<DualQuaternion> {
        Some(DualQuaternion::new(self.std.get(r, c)?, self.inf.get(r, c)?))
    }

    pub fn matmul(&self, rhs: &DualQuatMatrix) -> Result<DualQuatMatrix> {
        let std = self.std.matmul(&rhs.std)?;
        let inf = self.std.matmul(&rhs.inf)?.try_add(&self.inf.matmul(&rhs.std)?)?;
        Ok(Self { std, inf })
    }

    pub fn try_add(&self, rhs: &DualQuatMatrix) -> Result<DualQuatMatrix> {
        Ok(Self {
            std: self.std.try_add(&rhs.std)?,
            inf: self.inf.try_add(&rhs.inf)?,
        })
    }

    pub fn try_sub(&self, rhs: &DualQuatMatrix) -> Result<DualQuatMatrix> {
        Ok(Self {
            std: self.std.try_sub(&rhs.std)?,
            inf: self.inf.try_sub(&rhs.inf)?,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            std: self.std.scale(s),
            inf: self.inf.scale(s),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        Self {
            std: self.std.conj_transpose(),
            inf: self.inf.conj_transpose(),
        }
    }

    /// `A^{η*} = A₀^{η*} + A₁^{η*}ε`.
    pub fn eta_conj_transpose(&self, eta: EtaAxis) -> Self {
        Self {
            std: self.std.eta_conj_transpose(eta),
            inf: self.inf.eta_conj_transpose(eta),
        }
    }

    /// Root-sum-square of both parts' Frobenius norms.
    pub fn norm(&self) -> f64 {
        self.std.norm().hypot(self.inf.norm())
    }

    /// Distance from `A^{η*}` measured per part against `zero_abs·(1 + ‖A‖)`.
    pub fn eta_hermitian_residual(&self, eta: EtaAxis) -> Result<f64> {
        if !self.std.is_square() {
            return Err(Error::NotSquare {
                what: "eta-Hermitian test matrix",
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let t = self.eta_conj_transpose(eta);
        let d0 = (&self.std - &t.std).norm();
        let d1 = (&self.inf - &t.inf).norm();
        Ok(d0.max(d1))
    }

    /// `A = A^{η*}` on both parts within `zero_abs·(1 + ‖A‖)`.
    pub fn is_eta_hermitian(&self, eta: EtaAxis, tol: &Tolerance) -> Result<bool> {
        let res = self.eta_hermitian_residual(eta)?;
        Ok(tol.negligible(res, self.norm()))
    }

    /// Part-wise closeness within `zero_abs·(1 + ‖self‖ + ‖other‖)`.
    pub fn approx_eq(&self, other: &DualQuatMatrix, tol: &Tolerance) -> bool {
        if self.shape() != other.shape() {
            return false;
        }
        let scale = self.norm() + other.norm();
        tol.negligible((&self.std - &other.std).norm(), scale)
            && tol.negligible((&self.inf - &other.inf).norm(), scale)
    }
}

impl Add for &DualQuatMatrix {
    type Output = DualQuatMatrix;
    fn add(self, rhs: &DualQuatMatrix) -> DualQuatMatrix {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &DualQuatMatrix {
    type Output = DualQuatMatrix;
    fn sub(self, rhs: &DualQuatMatrix) -> DualQuatMatrix {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &DualQuatMatrix {
    type Output = DualQuatMatrix;
    fn mul(self, rhs: &DualQuatMatrix) -> DualQuatMatrix {
        self.matmul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &DualQuatMatrix {
    type Output = DualQuatMatrix;
    fn neg(self) -> DualQuatMatrix {
        DualQuatMatrix {
            std: -&self.std,
            inf: -&self.inf,
        }
    }
}

impl fmt::Display for DualQuatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "standard part:")?;
        writeln!(f, "{}", self.std)?;
        writeln!(f, "infinitesimal part:")?;
        write!(f, "{}", self.inf)
    }
}
