//! Real quaternions, dual quaternions and the η-involutions.
//!
//! Coefficients are stored scalar-first as `(w, x, y, z)`, i.e. the
//! coefficients of `1, i, j, k`. The same order is used by every file format
//! in this crate.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// A quaternion `w + x i + y j + z k` with `i² = j² = k² = ijk = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

impl Quaternion {
    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Quaternion conjugate `w − x i − y j − z k`.
    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// The η-involution `q^{η*} = −η q* η`.
    ///
    /// Computed through the Hamilton product rather than a coefficient table.
    /// For `η = i` this flips the sign of the `i` coefficient and keeps the
    /// others; `j` and `k` behave analogously.
    #[inline]
    pub fn eta_conj(self, eta: EtaAxis) -> Self {
        let u = eta.unit();
        -(u * self.conj() * u)
    }

    /// Squared Euclidean norm `q q*`.
    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl fmt::Display for Quaternion {
    /// Renders as `a+bi+cj+dk` with explicit signs, e.g. `1-2i+0j+3k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.w, self.x, self.y, self.z)
    }
}

/// Selects one of the three η-involutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EtaAxis {
    I,
    J,
    K,
}

impl EtaAxis {
    pub const ALL: [EtaAxis; 3] = [EtaAxis::I, EtaAxis::J, EtaAxis::K];

    /// The imaginary unit this axis names.
    pub fn unit(self) -> Quaternion {
        match self {
            EtaAxis::I => I,
            EtaAxis::J => J,
            EtaAxis::K => K,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EtaAxis::I => "i",
            EtaAxis::J => "j",
            EtaAxis::K => "k",
        }
    }
}

impl fmt::Display for EtaAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EtaAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "i" => Ok(EtaAxis::I),
            "j" => Ok(EtaAxis::J),
            "k" => Ok(EtaAxis::K),
            other => Err(format!("unknown eta axis `{other}`, expected one of i, j, k")),
        }
    }
}

/// A dual quaternion `std + inf ε` with `ε² = 0`; ε commutes with everything.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualQuaternion {
    pub std: Quaternion,
    pub inf: Quaternion,
}

impl DualQuaternion {
    #[inline]
    pub const fn new(std: Quaternion, inf: Quaternion) -> Self {
        Self { std, inf }
    }

    #[inline]
    pub const fn from_std(std: Quaternion) -> Self {
        Self { std, inf: ZERO }
    }

    /// Conjugates both parts independently.
    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.std.conj(), self.inf.conj())
    }

    #[inline]
    pub fn eta_conj(self, eta: EtaAxis) -> Self {
        Self::new(self.std.eta_conj(eta), self.inf.eta_conj(eta))
    }
}

impl Add for DualQuaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.std + o.std, self.inf + o.inf)
    }
}

impl Sub for DualQuaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.std - o.std, self.inf - o.inf)
    }
}

impl Neg for DualQuaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.std, -self.inf)
    }
}

/// `(a₀ + a₁ε)(b₀ + b₁ε) = a₀b₀ + (a₀b₁ + a₁b₀)ε`, order of factors kept.
impl Mul for DualQuaternion {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        Self::new(self.std * b.std, self.std * b.inf + self.inf * b.std)
    }
}

impl fmt::Display for DualQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {})", self.std, self.inf)
    }
}
