//! Fixtures shared by the integration tests.

#![allow(dead_code)]

use dqsolve::quaternion::{I, J, K, ONE, ZERO};
use dqsolve::{DualQuatMatrix, QuatMatrix, Quaternion};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
    Quaternion::new(w, x, y, z)
}

pub fn qm(rows: &[&[Quaternion]]) -> QuatMatrix {
    QuatMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

pub fn dual(std: QuatMatrix, inf: QuatMatrix) -> DualQuatMatrix {
    DualQuatMatrix::new(std, inf).unwrap()
}

/// The 2x2 worked example: coefficients `A, B, C, D` and its known solution.
pub struct Worked {
    pub a: DualQuatMatrix,
    pub b: DualQuatMatrix,
    pub c: DualQuatMatrix,
    pub d: DualQuatMatrix,
    pub x: DualQuatMatrix,
}

pub fn worked() -> Worked {
    let m1 = -ONE;
    let a = dual(qm(&[&[I, ZERO], &[ZERO, J]]), qm(&[&[K, J], &[ZERO, I]]));
    let b = dual(
        qm(&[&[I, m1], &[ZERO, I]]),
        qm(&[&[K, q(-1.0, 1.0, 1.0, 0.0)], &[m1, ZERO]]),
    );
    let c = dual(qm(&[&[q(1.0, 1.0, 0.0, 0.0), ZERO], &[J, K]]), qm(&[&[ZERO, ONE], &[J, ZERO]]));
    let d = dual(
        qm(&[&[q(1.0, 1.0, 0.0, 1.0), -J], &[-I, m1]]),
        qm(&[&[q(0.0, 0.0, 0.0, 2.0), q(1.0, 0.0, -1.0, 0.0)], &[q(0.0, -1.0, 2.0, -1.0), K]]),
    );
    let x = dual(qm(&[&[ONE, I], &[ZERO, K]]), qm(&[&[ZERO, I], &[J, ONE]]));
    Worked { a, b, c, d, x }
}

pub fn normal_quaternion(rng: &mut TestRng) -> Quaternion {
    let mut g = || rng.sample::<f64, _>(StandardNormal);
    q(g(), g(), g(), g())
}

pub fn normal_matrix(rows: usize, cols: usize, rng: &mut TestRng) -> QuatMatrix {
    QuatMatrix::from_fn(rows, cols, |_, _| normal_quaternion(rng))
}

/// A `rows x cols` matrix of rank `min(rank, rows, cols)` almost surely;
/// rank 0 gives the zero matrix.
pub fn low_rank(rows: usize, cols: usize, rank: usize, rng: &mut TestRng) -> QuatMatrix {
    if rank == 0 {
        return QuatMatrix::zeros(rows, cols);
    }
    &normal_matrix(rows, rank, rng) * &normal_matrix(rank, cols, rng)
}

/// A `rows x cols` matrix whose rank is drawn uniformly from `0..=min(rows, cols)`.
pub fn random_rank(rows: usize, cols: usize, rng: &mut TestRng) -> QuatMatrix {
    let rank = rng.gen_range(0..=rows.min(cols));
    low_rank(rows, cols, rank, rng)
}

/// A matrix with a random shape up to `max x max` and a random rank, full
/// rank included.
pub fn mixed_rank(max: usize, rng: &mut TestRng) -> QuatMatrix {
    let rows = rng.gen_range(1..=max);
    let cols = rng.gen_range(1..=max);
    let rank = rng.gen_range(0..=rows.min(cols));
    low_rank(rows, cols, rank, rng)
}

pub fn rank_deficient_dual(rows: usize, cols: usize, rng: &mut TestRng) -> DualQuatMatrix {
    let top = rows.min(cols);
    let r0 = rng.gen_range(0..=top);
    let r1 = rng.gen_range(0..=top);
    dual(low_rank(rows, cols, r0, rng), low_rank(rows, cols, r1, rng))
}

pub fn normal_dual(rows: usize, cols: usize, rng: &mut TestRng) -> DualQuatMatrix {
    dual(normal_matrix(rows, cols, rng), normal_matrix(rows, cols, rng))
}

/// `A X = B, X C = D` with `B`, `D` built from a planted `X`.
pub struct Planted {
    pub a: DualQuatMatrix,
    pub b: DualQuatMatrix,
    pub c: DualQuatMatrix,
    pub d: DualQuatMatrix,
    pub x: DualQuatMatrix,
}

pub fn planted_system(rng: &mut TestRng) -> Planted {
    let m = rng.gen_range(1..=4);
    let n = rng.gen_range(1..=4);
    let k = rng.gen_range(1..=4);
    let l = rng.gen_range(1..=4);
    let a = rank_deficient_dual(m, n, rng);
    let c = rank_deficient_dual(k, l, rng);
    let x = normal_dual(n, k, rng);
    let b = &a * &x;
    let d = &x * &c;
    Planted { a, b, c, d, x }
}

pub fn close(a: &QuatMatrix, b: &QuatMatrix, tol: f64) -> bool {
    a.distance(b).is_some_and(|d| d <= tol)
}
