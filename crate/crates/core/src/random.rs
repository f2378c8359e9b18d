//! Seeded generation of free parameters.
//!
//! Every coefficient is drawn i.i.d. uniform in `[−scale, scale]`, row-major,
//! in `(w, x, y, z)` order, from a ChaCha8 stream seeded with `seed_from_u64`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::QuatMatrix;
use crate::quaternion::Quaternion;

pub type ParamRng = ChaCha8Rng;

pub fn param_rng(seed: u64) -> ParamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_quaternion<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> Quaternion {
    let mut draw = || {
        if scale == 0.0 {
            0.0
        } else {
            rng.gen_range(-scale..=scale)
        }
    };
    let w = draw();
    let x = draw();
    let y = draw();
    let z = draw();
    Quaternion::new(w, x, y, z)
}

/// # Panics
/// If either dimension is zero.
pub fn uniform_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, scale: f64, rng: &mut R) -> QuatMatrix {
    QuatMatrix::from_fn(rows, cols, |_, _| uniform_quaternion(scale, rng))
}
