use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

const TWO64: f64 = 18_446_744_073_709_551_616.0; // 2^64

/// A point of the circle R/Z stored as an unsigned 64-bit fixed-point
/// fraction: the represented value is `raw / 2^64`.
///
/// The representable set is exactly the dyadic grid {k/2^64 : 0 <= k < 2^64},
/// and the wrapping integer arithmetic of `u64` realizes arithmetic modulo 1
/// on that grid with no rounding at all. Addition, subtraction, negation and
/// integer scalings are exact; only conversion to `f64` rounds.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusCoord(u64);

impl TorusCoord {
    pub const ZERO: TorusCoord = TorusCoord(0);
    pub const HALF: TorusCoord = TorusCoord(1 << 63);

    pub const fn from_raw(raw: u64) -> Self {
        TorusCoord(raw)
    }

    pub const fn raw(self) -> u64 {
        self.0
    }

    /// Reduce a real number modulo 1 and round it once to the nearest
    /// representable fraction. `x = 1 - 2^-65` rounds up and wraps to 0,
    /// which is the correct answer modulo 1.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "torus coordinate must be finite");
        let f = x.rem_euclid(1.0);
        let scaled = (f * TWO64).round();
        TorusCoord(scaled as u128 as u64)
    }

    /// Nearest `f64` to the represented value; the only lossy operation.
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / TWO64
    }

    /// Exact multiplication by an integer, modulo 1. Two's-complement
    /// wrapping multiplication is multiplication in Z/2^64, which is exactly
    /// `k * value mod 1` on the fixed-point grid, signs included.
    pub fn scale(self, k: i64) -> Self {
        TorusCoord(self.0.wrapping_mul(k as u64))
    }

    /// Exact multiplication by an unsigned multiplier taken modulo 2^64.
    pub fn scale_u64(self, k: u64) -> Self {
        TorusCoord(self.0.wrapping_mul(k))
    }

    /// Index of the coordinate in an exact partition of [0,1) into `bins`
    /// half-open equal cells.
    pub fn bin(self, bins: usize) -> usize {
        debug_assert!(bins >= 1);
        ((self.0 as u128 * bins as u128) >> 64) as usize
    }

    /// Circle distance `min(|a-b|, 1-|a-b|)` computed exactly on raws and
    /// rounded once at the end.
    pub fn circle_dist(self, other: Self) -> f64 {
        let d = self.0.wrapping_sub(other.0);
        let d = d.min(d.wrapping_neg());
        d as f64 / TWO64
    }

    /// Distance to the nearest integer, i.e. the circle distance to 0.
    pub fn dist_to_zero(self) -> f64 {
        self.circle_dist(TorusCoord::ZERO)
    }
}

impl Add for TorusCoord {
    type Output = TorusCoord;
    fn add(self, rhs: Self) -> Self {
        TorusCoord(self.0.wrapping_add(rhs.0))
    }
}

impl AddAssign for TorusCoord {
    fn add_assign(&mut self, rhs: Self) {
        self.0 = self.0.wrapping_add(rhs.0);
    }
}

impl Sub for TorusCoord {
    type Output = TorusCoord;
    fn sub(self, rhs: Self) -> Self {
        TorusCoord(self.0.wrapping_sub(rhs.0))
    }
}

impl SubAssign for TorusCoord {
    fn sub_assign(&mut self, rhs: Self) {
        self.0 = self.0.wrapping_sub(rhs.0);
    }
}

impl Neg for TorusCoord {
    type Output = TorusCoord;
    fn neg(self) -> Self {
        TorusCoord(self.0.wrapping_neg())
    }
}

impl fmt::Debug for TorusCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusCoord({} ~ {})", self.0, self.to_f64())
    }
}

// Display prints the float view; handy in CSV dumps and error messages.
impl fmt::Display for TorusCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}
