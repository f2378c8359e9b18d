//! Dense quaternion matrices.
//!
//! Rank, Moore–Penrose inverse and the projectors `L_A = I − A†A`,
//! `R_A = I − AA†` are computed through the complex adjoint
//! `[[P, Q], [−conj(Q), conj(P)]]` of `A = P + Qj`, using one complex SVD.
//! The adjoint's singular values come in equal pairs; every cutoff decision
//! is made per pair, so the pseudoinverse keeps the block structure and maps
//! back to a quaternion matrix.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use faer::{c64, Mat};

use crate::error::{Error, Result};
use crate::quaternion::{EtaAxis, Quaternion, ONE, ZERO};

/// Numerical thresholds.
///
/// * `rank_rel`: singular values at or below `rank_rel · max(σ_max, scale_floor)`
///   count as zero for rank and pseudoinverse.
/// * `zero_abs`: a matrix expression that should vanish is accepted when
///   `‖M‖ ≤ zero_abs · (1 + operand scale)`.
/// * `scale_floor`: absolute reference for the singular-value cutoff. Zero
///   gives a purely relative cutoff. Solvers set it to the problem scale so
///   that derived matrices which are zero up to rounding get rank 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rank_rel: f64,
    pub zero_abs: f64,
    pub scale_floor: f64,
}

pub const DEFAULT_RANK_REL: f64 = 1e-10;
pub const DEFAULT_ZERO_ABS: f64 = 1e-10;

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_rel: DEFAULT_RANK_REL,
            zero_abs: DEFAULT_ZERO_ABS,
            scale_floor: 0.0,
        }
    }
}

impl Tolerance {
    pub fn new(rank_rel: f64, zero_abs: f64) -> Result<Self> {
        let tol = Self {
            rank_rel,
            zero_abs,
            scale_floor: 0.0,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rank_rel > 0.0 && self.rank_rel.is_finite()) {
            return Err(Error::InvalidTolerance(format!(
                "rank_rel must be positive and finite, got {}",
                self.rank_rel
            )));
        }
        if !(self.zero_abs > 0.0 && self.zero_abs.is_finite()) {
            return Err(Error::InvalidTolerance(format!(
                "zero_abs must be positive and finite, got {}",
                self.zero_abs
            )));
        }
        if !(self.scale_floor >= 0.0 && self.scale_floor.is_finite()) {
            return Err(Error::InvalidTolerance(format!(
                "scale_floor must be nonnegative and finite, got {}",
                self.scale_floor
            )));
        }
        Ok(())
    }

    pub fn with_scale_floor(self, scale_floor: f64) -> Self {
        Self {
            scale_floor,
            ..self
        }
    }

    /// `‖m‖ ≤ zero_abs · (1 + operand_scale)`.
    pub fn negligible(&self, norm: f64, operand_scale: f64) -> bool {
        norm <= self.threshold(operand_scale)
    }

    pub fn threshold(&self, operand_scale: f64) -> f64 {
        self.zero_abs * (1.0 + operand_scale)
    }
}

/// Dense row-major `rows × cols` quaternion matrix, both dimensions positive.
#[derive(Debug, Clone, PartialEq)]
pub struct QuatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QuatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyShape { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Quaternion>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::EntryCount {
                rows: r,
                cols: c,
                expected: c,
                actual: bad.len(),
            });
        }
        Self::new(r, c, rows.concat())
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        assert!(rows > 0 && cols > 0, "empty {rows}x{cols} matrix");
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    /// # Panics
    /// If `n` is zero.
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { ONE } else { ZERO })
    }

    /// Real matrix, given row-major.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&v| Quaternion::real(v)).collect())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Quaternion> {
        self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Option<Quaternion> {
        (r < self.rows && c < self.cols).then(|| self.data[r * self.cols + c])
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&q| f(q)).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|q| q.is_finite())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|q| q * s)
    }

    /// `q · A`, the scalar acting from the left on every entry.
    pub fn left_scalar(&self, q: Quaternion) -> Self {
        self.map(|e| q * e)
    }

    /// `A · q`, the scalar acting from the right on every entry.
    pub fn right_scalar(&self, q: Quaternion) -> Self {
        self.map(|e| e * q)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    /// `A*`, entry `(r, c)` is the conjugate of `A(c, r)`.
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    /// `A^{η*} = −η A* η`.
    pub fn eta_conj_transpose(&self, eta: EtaAxis) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].eta_conj(eta))
    }

    /// Quaternionic Frobenius norm. Equals `‖adjoint(A)‖_F / √2`.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .flat_map(|q| q.to_array())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn matmul(&self, rhs: &QuatMatrix) -> Result<QuatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch {
                op: "matrix product",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = vec![ZERO; self.rows * rhs.cols];
        for r in 0..self.rows {
            for t in 0..self.cols {
                let a = self.data[r * self.cols + t];
                if a == ZERO {
                    continue;
                }
                let brow = &rhs.data[t * rhs.cols..(t + 1) * rhs.cols];
                let orow = &mut out[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        })
    }

    pub fn try_add(&self, rhs: &QuatMatrix) -> Result<QuatMatrix> {
        self.zip_with(rhs, "matrix sum", |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &QuatMatrix) -> Result<QuatMatrix> {
        self.zip_with(rhs, "matrix difference", |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &QuatMatrix,
        op: &'static str,
        f: impl Fn(Quaternion, Quaternion) -> Quaternion,
    ) -> Result<QuatMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// `‖self − other‖`, or `None` for different shapes.
    pub fn distance(&self, other: &QuatMatrix) -> Option<f64> {
        self.try_sub(other).ok().map(|d| d.norm())
    }

    /// `[self, rhs]`.
    pub fn hstack(&self, rhs: &QuatMatrix) -> Result<QuatMatrix> {
        block(&[&[Block::M(self), Block::M(rhs)]])
    }

    /// `[self; rhs]`.
    pub fn vstack(&self, rhs: &QuatMatrix) -> Result<QuatMatrix> {
        block(&[&[Block::M(self)], &[Block::M(rhs)]])
    }

    /// Complex adjoint `[[P, Q], [−conj(Q), conj(P)]]` of `P + Qj`.
    pub fn to_adjoint(&self) -> ComplexAdjoint {
        let (m, n) = self.shape();
        let mut out = Mat::<c64>::zeros(2 * m, 2 * n);
        for r in 0..m {
            for c in 0..n {
                let q = self[(r, c)];
                let p = c64::new(q.w, q.x);
                let s = c64::new(q.y, q.z);
                out[(r, c)] = p;
                out[(r, c + n)] = s;
                out[(r + m, c)] = -s.conj();
                out[(r + m, c + n)] = p.conj();
            }
        }
        ComplexAdjoint(out)
    }

    fn spectrum(&self) -> Spectrum {
        Spectrum::of(self)
    }

    /// Quaternion rank: number of singular-value pairs of the adjoint above
    /// the cutoff.
    pub fn rank(&self, tol: &Tolerance) -> usize {
        self.spectrum().rank(tol)
    }

    /// Moore–Penrose inverse `A†`.
    pub fn pinv(&self, tol: &Tolerance) -> QuatMatrix {
        self.spectrum().pinv(tol)
    }

    /// `L_A = I − A†A` (n × n).
    pub fn proj_l(&self, tol: &Tolerance) -> QuatMatrix {
        Projectors::new(self, tol).l
    }

    /// `R_A = I − AA†` (m × m).
    pub fn proj_r(&self, tol: &Tolerance) -> QuatMatrix {
        Projectors::new(self, tol).r
    }

    /// Convenience for the "= 0" conditions: `‖self‖ ≤ zero_abs·(1 + scale)`.
    pub fn is_negligible(&self, tol: &Tolerance, operand_scale: f64) -> bool {
        tol.negligible(self.norm(), operand_scale)
    }
}

/// `A†`, `L_A` and `R_A` from a single SVD.
#[derive(Debug, Clone)]
pub struct Projectors {
    pub pinv: QuatMatrix,
    pub l: QuatMatrix,
    pub r: QuatMatrix,
    pub rank: usize,
}

impl Projectors {
    pub fn new(a: &QuatMatrix, tol: &Tolerance) -> Self {
        let spec = a.spectrum();
        let rank = spec.rank(tol);
        let pinv = spec.pinv(tol);
        let l = &QuatMatrix::identity(a.cols) - &(&pinv * a);
        let r = &QuatMatrix::identity(a.rows) - &(a * &pinv);
        Self { pinv, l, r, rank }
    }
}

/// SVD of the complex adjoint with singular values grouped in pairs.
struct Spectrum {
    rows: usize,
    cols: usize,
    /// Pair means, descending.
    pairs: Vec<f64>,
    /// Per pair, the two SVD component indices.
    members: Vec<[usize; 2]>,
    u: Mat<c64>,
    v: Mat<c64>,
    sigma: Vec<f64>,
}

impl Spectrum {
    fn of(a: &QuatMatrix) -> Self {
        let adj = a.to_adjoint().0;
        let svd = adj
            .thin_svd()
            .expect("SVD of a finite complex matrix converges");
        let s = svd.S().column_vector();
        let sigma: Vec<f64> = (0..s.nrows()).map(|i| s[i].re).collect();
        let mut order: Vec<usize> = (0..sigma.len()).collect();
        order.sort_by(|&x, &y| sigma[y].total_cmp(&sigma[x]));
        let mut pairs = Vec::with_capacity(order.len() / 2);
        let mut members = Vec::with_capacity(order.len() / 2);
        for chunk in order.chunks(2) {
            let [p, q] = [chunk[0], chunk[chunk.len() - 1]];
            pairs.push(0.5 * (sigma[p] + sigma[q]));
            members.push([p, q]);
        }
        Self {
            rows: a.rows,
            cols: a.cols,
            pairs,
            members,
            u: svd.U().to_owned(),
            v: svd.V().to_owned(),
            sigma,
        }
    }

    fn cutoff(&self, tol: &Tolerance) -> f64 {
        let smax = self.pairs.first().copied().unwrap_or(0.0);
        tol.rank_rel * smax.max(tol.scale_floor)
    }

    fn rank(&self, tol: &Tolerance) -> usize {
        let cut = self.cutoff(tol);
        self.pairs.iter().take_while(|&&s| s > cut).count()
    }

    fn pinv(&self, tol: &Tolerance) -> QuatMatrix {
        let rank = self.rank(tol);
        let (m2, n2) = (2 * self.rows, 2 * self.cols);
        let mut out = Mat::<c64>::zeros(n2, m2);
        for pair in &self.members[..rank] {
            let mut seen = usize::MAX;
            for &idx in pair {
                if idx == seen {
                    continue;
                }
                seen = idx;
                let inv = 1.0 / self.sigma[idx];
                // v_i u_i^H / σ_i
                for r in 0..n2 {
                    let vr = self.v[(r, idx)] * inv;
                    for c in 0..m2 {
                        out[(r, c)] += vr * self.u[(c, idx)].conj();
                    }
                }
            }
        }
        ComplexAdjoint(out)
            .to_quat()
            .expect("pairwise truncation preserves the adjoint block structure")
    }
}

/// A `2m × 2n` complex matrix with quaternionic block structure.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexAdjoint(pub Mat<c64>);

/// Largest admissible block-structure defect, relative to `1 + ‖M‖_max`.
pub const ADJOINT_STRUCTURE_LIMIT: f64 = 1e-6;

impl ComplexAdjoint {
    pub fn matrix(&self) -> &Mat<c64> {
        &self.0
    }

    /// Maps back to `P + Qj`, averaging `P` from the (1,1) block and the
    /// conjugated (2,2) block, and `Q` likewise from (1,2) and (2,1).
    pub fn to_quat(&self) -> Result<QuatMatrix> {
        let (r2, c2) = self.0.shape();
        if r2 == 0 || c2 == 0 || r2 % 2 != 0 || c2 % 2 != 0 {
            return Err(Error::EmptyShape {
                rows: r2 / 2,
                cols: c2 / 2,
            });
        }
        let (m, n) = (r2 / 2, c2 / 2);
        let scale = self.0.norm_max();
        let mut deviation = 0.0f64;
        let mut data = Vec::with_capacity(m * n);
        for r in 0..m {
            for c in 0..n {
                let p1 = self.0[(r, c)];
                let p2 = self.0[(r + m, c + n)].conj();
                let q1 = self.0[(r, c + n)];
                let q2 = -self.0[(r + m, c)].conj();
                deviation = deviation.max((p1 - p2).norm()).max((q1 - q2).norm());
                let p = (p1 + p2) * 0.5;
                let q = (q1 + q2) * 0.5;
                data.push(Quaternion::new(p.re, p.im, q.re, q.im));
            }
        }
        if deviation > ADJOINT_STRUCTURE_LIMIT * (1.0 + scale) {
            return Err(Error::AdjointStructure { deviation });
        }
        QuatMatrix::new(m, n, data)
    }
}

/// One cell of a block matrix.
#[derive(Debug, Clone, Copy)]
pub enum Block<'a> {
    M(&'a QuatMatrix),
    /// Zero block; shape inferred from its block row and block column.
    Zero,
    /// Identity block; must end up square.
    Identity,
}

impl Block<'_> {
    fn shape(&self) -> Option<(usize, usize)> {
        match self {
            Block::M(m) => Some(m.shape()),
            _ => None,
        }
    }
}

/// Assembles a block matrix. Every block row and block column needs at least
/// one concrete matrix to fix its size.
pub fn block(grid: &[&[Block<'_>]]) -> Result<QuatMatrix> {
    let nbr = grid.len();
    let nbc = grid.first().map_or(0, |r| r.len());
    let mut heights = vec![None; nbr];
    let mut widths = vec![None; nbc];
    for (bi, row) in grid.iter().enumerate() {
        if row.len() != nbc {
            return Err(Error::ShapeMismatch {
                op: "block layout",
                left: (bi, nbc),
                right: (bi, row.len()),
            });
        }
        for (bj, b) in row.iter().enumerate() {
            if let Some((h, w)) = b.shape() {
                for (slot, v) in [(&mut heights[bi], h), (&mut widths[bj], w)] {
                    match *slot {
                        Some(old) if old != v => {
                            return Err(Error::ShapeMismatch {
                                op: "block assembly",
                                left: (bi, bj),
                                right: (old, v),
                            })
                        }
                        _ => *slot = Some(v),
                    }
                }
            }
        }
    }
    // Identity blocks are square, so each fixes a missing height or width.
    let mut changed = true;
    while changed {
        changed = false;
        for (bi, row) in grid.iter().enumerate() {
            for (bj, b) in row.iter().enumerate() {
                if let Block::Identity = b {
                    match (heights[bi], widths[bj]) {
                        (Some(h), None) => widths[bj] = Some(h),
                        (None, Some(w)) => heights[bi] = Some(w),
                        _ => continue,
                    }
                    changed = true;
                }
            }
        }
    }
    let heights: Vec<usize> = heights
        .into_iter()
        .map(|h| h.ok_or(Error::EmptyShape { rows: 0, cols: nbc }))
        .collect::<Result<_>>()?;
    let widths: Vec<usize> = widths
        .into_iter()
        .map(|w| w.ok_or(Error::EmptyShape { rows: nbr, cols: 0 }))
        .collect::<Result<_>>()?;
    let rows: usize = heights.iter().sum();
    let cols: usize = widths.iter().sum();
    let mut out = QuatMatrix::zeros(rows, cols);
    let mut r0 = 0;
    for (bi, row) in grid.iter().enumerate() {
        let mut c0 = 0;
        for (bj, b) in row.iter().enumerate() {
            match b {
                Block::M(m) => {
                    for r in 0..m.rows {
                        for c in 0..m.cols {
                            out[(r0 + r, c0 + c)] = m[(r, c)];
                        }
                    }
                }
                Block::Identity => {
                    if heights[bi] != widths[bj] {
                        return Err(Error::NotSquare {
                            what: "identity block",
                            rows: heights[bi],
                            cols: widths[bj],
                        });
                    }
                    for d in 0..heights[bi] {
                        out[(r0 + d, c0 + d)] = ONE;
                    }
                }
                Block::Zero => {}
            }
            c0 += widths[bj];
        }
        r0 += heights[bi];
    }
    Ok(out)
}

/// Both sides of the Marsaglia–Styan rank identity
/// `r[[A, B L_D], [R_E C, 0]] = r[[A, B, 0], [C, 0, E], [0, D, 0]] − r(E) − r(D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankIdentityCheck {
    pub lhs_rank: i64,
    pub rhs_rank: i64,
    pub holds: bool,
}

/// Evaluates both sides of the bordered-rank identity for
/// `A: n×m, B: n×l, C: k×m, D: l₁×l, E: k×l₂`.
pub fn marsaglia_styan_check(
    a: &QuatMatrix,
    b: &QuatMatrix,
    c: &QuatMatrix,
    d: &QuatMatrix,
    e: &QuatMatrix,
    tol: &Tolerance,
) -> Result<RankIdentityCheck> {
    let expect = |op, ok: bool, l: &QuatMatrix, r: &QuatMatrix| {
        if ok {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                op,
                left: l.shape(),
                right: r.shape(),
            })
        }
    };
    expect("Marsaglia-Styan A/B rows", a.rows == b.rows, a, b)?;
    expect("Marsaglia-Styan A/C cols", a.cols == c.cols, a, c)?;
    expect("Marsaglia-Styan B/D cols", b.cols == d.cols, b, d)?;
    expect("Marsaglia-Styan C/E rows", c.rows == e.rows, c, e)?;

    let scale = [a, b, c, d, e].iter().map(|m| m.norm()).fold(1.0f64, f64::max);
    let tol = tol.with_scale_floor(tol.scale_floor.max(scale * scale));
    let bl = b * &d.proj_l(&tol);
    let rc = &e.proj_r(&tol) * c;
    let lhs = block(&[&[Block::M(a), Block::M(&bl)], &[Block::M(&rc), Block::Zero]])?;
    let bordered = block(&[
        &[Block::M(a), Block::M(b), Block::Zero],
        &[Block::M(c), Block::Zero, Block::M(e)],
        &[Block::Zero, Block::M(d), Block::Zero],
    ])?;
    let lhs_rank = lhs.rank(&tol) as i64;
    let rhs_rank = bordered.rank(&tol) as i64 - e.rank(&tol) as i64 - d.rank(&tol) as i64;
    Ok(RankIdentityCheck {
        lhs_rank,
        rhs_rank,
        holds: lhs_rank == rhs_rank,
    })
}

impl Index<(usize, usize)> for QuatMatrix {
    type Output = Quaternion;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Quaternion {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for QuatMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Quaternion {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

// Operator forms panic on shape mismatch; the `try_*`/`matmul` methods report it.

impl Add for &QuatMatrix {
    type Output = QuatMatrix;
    fn add(self, rhs: &QuatMatrix) -> QuatMatrix {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &QuatMatrix {
    type Output = QuatMatrix;
    fn sub(self, rhs: &QuatMatrix) -> QuatMatrix {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &QuatMatrix {
    type Output = QuatMatrix;
    fn mul(self, rhs: &QuatMatrix) -> QuatMatrix {
        self.matmul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &QuatMatrix {
    type Output = QuatMatrix;
    fn neg(self) -> QuatMatrix {
        self.map(|q| -q)
    }
}

impl fmt::Display for QuatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            f.write_str("[")?;
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            f.write_str("]")?;
            if r + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::{I, J, K};
    use crate::random::uniform_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    fn close(a: &QuatMatrix, b: &QuatMatrix, tol: f64) -> bool {
        a.distance(b).is_some_and(|d| d <= tol)
    }

    fn diag_ij() -> QuatMatrix {
        QuatMatrix::from_rows(&[vec![I, ZERO], vec![ZERO, J]]).unwrap()
    }

    #[test]
    fn rejects_empty_and_miscounted() {
        assert!(matches!(QuatMatrix::new(0, 2, vec![]), Err(Error::EmptyShape { .. })));
        assert!(matches!(
            QuatMatrix::new(2, 2, vec![ONE; 3]),
            Err(Error::EntryCount { expected: 4, actual: 3, .. })
        ));
    }

    #[test]
    fn matmul_examples() {
        let a = diag_ij();
        assert_eq!(&a * &QuatMatrix::identity(2), a);
        let si = QuatMatrix::new(1, 1, vec![I]).unwrap();
        let sj = QuatMatrix::new(1, 1, vec![J]).unwrap();
        assert_eq!(&si * &sj, QuatMatrix::new(1, 1, vec![K]).unwrap());
        assert!(matches!(a.matmul(&si), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn conj_transpose_examples() {
        let row = QuatMatrix::from_rows(&[vec![I, J]]).unwrap();
        let col = QuatMatrix::from_rows(&[vec![-I], vec![-J]]).unwrap();
        assert_eq!(row.conj_transpose(), col);
    }

    #[test]
    fn eta_conj_transpose_examples() {
        assert_eq!(QuatMatrix::identity(2).eta_conj_transpose(EtaAxis::J), QuatMatrix::identity(2));
        let si = QuatMatrix::new(1, 1, vec![I]).unwrap();
        assert_eq!(si.eta_conj_transpose(EtaAxis::I), QuatMatrix::new(1, 1, vec![-I]).unwrap());
        // matches −η A* η computed with scalar actions
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = uniform_matrix(3, 2, 1.0, &mut rng);
        for eta in EtaAxis::ALL {
            let u = eta.unit();
            let direct = a.conj_transpose().left_scalar(-u).right_scalar(u);
            assert!(close(&a.eta_conj_transpose(eta), &direct, 1e-15));
            assert_eq!(a.eta_conj_transpose(eta).eta_conj_transpose(eta), a);
        }
    }

    #[test]
    fn adjoint_of_units() {
        let j = QuatMatrix::new(1, 1, vec![J]).unwrap().to_adjoint();
        assert_eq!(j.0[(0, 0)], c64::new(0.0, 0.0));
        assert_eq!(j.0[(0, 1)], c64::new(1.0, 0.0));
        assert_eq!(j.0[(1, 0)], c64::new(-1.0, 0.0));
        assert_eq!(j.0[(1, 1)], c64::new(0.0, 0.0));
        let one = QuatMatrix::identity(1).to_adjoint();
        assert_eq!(one.0, Mat::<c64>::identity(2, 2));
    }

    #[test]
    fn adjoint_round_trip_and_structure_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = uniform_matrix(3, 4, 2.0, &mut rng);
        assert_eq!(a.to_adjoint().to_quat().unwrap(), a);
        let mut broken = a.to_adjoint();
        broken.0[(0, 0)] += c64::new(1.0, 0.0);
        assert!(matches!(broken.to_quat(), Err(Error::AdjointStructure { .. })));
    }

    #[test]
    fn adjoint_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = uniform_matrix(3, 4, 1.0, &mut rng);
            let b = uniform_matrix(4, 2, 1.0, &mut rng);
            let c = uniform_matrix(3, 4, 1.0, &mut rng);
            let prod = (&a * &b).to_adjoint().0;
            let cprod = &a.to_adjoint().0 * &b.to_adjoint().0;
            assert!((prod - &cprod).norm_l2() <= 1e-12 * (1.0 + cprod.norm_l2()));
            let sum = (&a + &c).to_adjoint().0;
            let csum = &a.to_adjoint().0 + &c.to_adjoint().0;
            assert!((sum - &csum).norm_l2() <= 1e-12 * (1.0 + csum.norm_l2()));
            let ct = a.conj_transpose().to_adjoint().0;
            assert!((ct - a.to_adjoint().0.adjoint()).norm_l2() <= 1e-12);
            assert!((a.to_adjoint().0.norm_l2() / 2f64.sqrt() - a.norm()).abs() <= 1e-12 * a.norm());
        }
    }

    #[test]
    fn rank_examples() {
        let tol = Tolerance::default();
        assert_eq!(diag_ij().rank(&tol), 2);
        assert_eq!(QuatMatrix::zeros(3, 2).rank(&tol), 0);
        // second row is j times the first
        let m = QuatMatrix::from_rows(&[vec![ONE, I], vec![J, -K]]).unwrap();
        assert_eq!(&QuatMatrix::new(1, 1, vec![J]).unwrap() * &QuatMatrix::from_rows(&[vec![ONE, I]]).unwrap(),
            QuatMatrix::from_rows(&[vec![J, -K]]).unwrap());
        assert_eq!(m.rank(&tol), 1);
        assert_eq!(m.conj_transpose().rank(&tol), 1);
    }

    #[test]
    fn pinv_examples() {
        let tol = Tolerance::default();
        let expect = QuatMatrix::from_rows(&[vec![-I, ZERO], vec![ZERO, -J]]).unwrap();
        assert!(close(&diag_ij().pinv(&tol), &expect, 1e-14));
        assert_eq!(QuatMatrix::zeros(2, 3).pinv(&tol), QuatMatrix::zeros(3, 2));
        let row = QuatMatrix::from_rows(&[vec![ONE, I]]).unwrap();
        let col = QuatMatrix::from_rows(&[vec![q(0.5, 0.0, 0.0, 0.0)], vec![q(0.0, -0.5, 0.0, 0.0)]]).unwrap();
        assert!(close(&row.pinv(&tol), &col, 1e-14));
    }

    #[test]
    fn projector_examples() {
        let tol = Tolerance::default();
        let inv = QuatMatrix::from_rows(&[vec![ONE, I], vec![J, ONE]]).unwrap();
        assert_eq!(inv.rank(&tol), 2);
        assert!(inv.proj_l(&tol).norm() < 1e-14);
        assert!(inv.proj_r(&tol).norm() < 1e-14);

        let z = QuatMatrix::zeros(2, 3);
        assert_eq!(z.proj_l(&tol), QuatMatrix::identity(3));
        assert_eq!(z.proj_r(&tol), QuatMatrix::identity(2));

        // a = [1, i]: a† = [1/2; −i/2], a†a = [[1/2, i/2], [−i/2, 1/2]] computed by
        // hand, so L_a = I − a†a = [[1/2, −i/2], [i/2, 1/2]].
        let row = QuatMatrix::from_rows(&[vec![ONE, I]]).unwrap();
        let pinv_hand = QuatMatrix::from_rows(&[vec![q(0.5, 0.0, 0.0, 0.0)], vec![q(0.0, -0.5, 0.0, 0.0)]]).unwrap();
        let apa = &pinv_hand * &row;
        let apa_expected = QuatMatrix::from_rows(&[
            vec![q(0.5, 0.0, 0.0, 0.0), q(0.0, 0.5, 0.0, 0.0)],
            vec![q(0.0, -0.5, 0.0, 0.0), q(0.5, 0.0, 0.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(apa, apa_expected);
        let l_expected = &QuatMatrix::identity(2) - &apa_expected;
        let l = row.proj_l(&tol);
        assert!(close(&l, &l_expected, 1e-14));
        assert!(close(&(&l * &l), &l, 1e-14));
    }

    #[test]
    fn block_assembly() {
        let a = diag_ij();
        let row = QuatMatrix::from_rows(&[vec![ONE, I]]).unwrap();
        let m = block(&[&[Block::M(&a), Block::Zero], &[Block::M(&row), Block::Identity]]).unwrap();
        assert_eq!(m.shape(), (3, 3));
        assert_eq!(m[(2, 2)], ONE);
        assert_eq!(m[(0, 2)], ZERO);
        assert_eq!(m[(2, 1)], I);
        assert!(block(&[&[Block::Zero]]).is_err());
        assert!(a.hstack(&row).is_err());
    }

    #[test]
    fn marsaglia_styan_degenerate_cases() {
        let tol = Tolerance::default();
        let z = |r, c| QuatMatrix::zeros(r, c);
        let res = marsaglia_styan_check(&z(2, 3), &z(2, 2), &z(1, 3), &z(2, 2), &z(1, 2), &tol).unwrap();
        assert_eq!(res, RankIdentityCheck { lhs_rank: 0, rhs_rank: 0, holds: true });

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = uniform_matrix(3, 3, 1.0, &mut rng);
        let b = uniform_matrix(3, 2, 1.0, &mut rng);
        let c = uniform_matrix(2, 3, 1.0, &mut rng);
        let d = QuatMatrix::from_rows(&[vec![ONE, I], vec![J, ONE]]).unwrap();
        let e = diag_ij();
        let res = marsaglia_styan_check(&a, &b, &c, &d, &e, &tol).unwrap();
        assert!(res.holds);
        assert_eq!(res.lhs_rank, a.rank(&tol) as i64);

        assert!(marsaglia_styan_check(&a, &c, &c, &d, &e, &tol).is_err());
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(0.0, 1e-10).is_err());
        assert!(Tolerance::new(1e-10, f64::NAN).is_err());
        assert!(Tolerance::new(1e-12, 1e-9).is_ok());
    }
}
