use num_bigint::BigUint;

use crate::error::DynamicsError;
use crate::torus::TorusCoord;

/// Rotation angles. Tagged constructions are irrational by construction; an
/// explicit value carries no such guarantee and is flagged accordingly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleTag {
    /// (sqrt(5) - 1) / 2.
    Golden,
    /// Fractional part of sqrt(p) for a prime p.
    SqrtPrime(u64),
    /// A caller-supplied real, reduced modulo 1.
    Explicit(f64),
}

/// A rotation angle in (0,1), rounded once to the nearest multiple of 2^-64
/// at construction. All later rotation arithmetic on the rounded value is
/// exact, so the represented system is a genuine rotation by a rational with
/// denominator 2^64 whose period is far beyond any orbit length used here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSpec {
    tag: AngleTag,
    coord: TorusCoord,
}

impl AngleSpec {
    /// The golden rotation number (sqrt(5) - 1) / 2.
    pub fn golden() -> Self {
        // (sqrt(5) - 1)/2 in 128 fractional bits: frac128(sqrt 5) is in
        // (0, 2^128), and (sqrt(5)-1)/2 = (frac128 + 2^128) / 2^129.
        let frac = sqrt_frac128(5);
        let g = (frac >> 1) | (1u128 << 127);
        AngleSpec {
            tag: AngleTag::Golden,
            coord: round_frac128(g),
        }
    }

    /// Fractional part of sqrt(p); `p` must be prime.
    pub fn sqrt_prime(p: u64) -> Result<Self, DynamicsError> {
        if !is_prime(p) {
            return Err(DynamicsError::NotPrime { p });
        }
        Ok(AngleSpec {
            tag: AngleTag::SqrtPrime(p),
            coord: round_frac128(sqrt_frac128(p)),
        })
    }

    /// An arbitrary angle, reduced mod 1; rejected if it rounds to 0 (that
    /// would be the identity rotation).
    pub fn explicit(value: f64) -> Result<Self, DynamicsError> {
        if !value.is_finite() {
            return Err(DynamicsError::InvalidAngle);
        }
        let coord = TorusCoord::from_f64(value);
        if coord.raw() == 0 {
            return Err(DynamicsError::InvalidAngle);
        }
        Ok(AngleSpec {
            tag: AngleTag::Explicit(value),
            coord,
        })
    }

    pub fn tag(&self) -> AngleTag {
        self.tag
    }

    /// The rounded angle as an exact fixed-point fraction.
    pub fn coord(&self) -> TorusCoord {
        self.coord
    }

    /// Float view of the rounded angle.
    pub fn value(&self) -> f64 {
        self.coord.to_f64()
    }

    /// Whether irrationality of the (unrounded) angle is guaranteed by the
    /// construction rather than asserted by the caller.
    pub fn guaranteed_irrational(&self) -> bool {
        !matches!(self.tag, AngleTag::Explicit(_))
    }

    /// Rotate a coordinate: `w + alpha mod 1`, exact.
    pub fn apply(&self, w: TorusCoord) -> TorusCoord {
        w + self.coord
    }

    /// Prime whose square root generates the angle over Q, if any. The
    /// golden angle is an affine image of sqrt(5).
    fn radicand(&self) -> Option<u64> {
        match self.tag {
            AngleTag::Golden => Some(5),
            AngleTag::SqrtPrime(p) => Some(p),
            AngleTag::Explicit(_) => None,
        }
    }
}

/// Whether a list of angles is rationally independent *by construction*:
/// every angle is a Q-affine image of the square root of a prime, and the
/// primes are pairwise distinct. This is a documented assumption resting on
/// the linear independence of square roots of distinct primes over Q, not a
/// proof object; note that `golden` occupies the prime 5, so `golden`
/// together with `sqrt_prime(5)` is *dependent* (2*golden - frac(sqrt 5) = 1
/// mod 1) and is rejected here.
pub fn rationally_independent_by_construction(angles: &[AngleSpec]) -> bool {
    let mut primes = Vec::with_capacity(angles.len());
    for angle in angles {
        match angle.radicand() {
            Some(p) if !primes.contains(&p) => primes.push(p),
            _ => return false,
        }
    }
    !angles.is_empty()
}

/// floor(frac(sqrt(p)) * 2^128), exact via an integer square root.
fn sqrt_frac128(p: u64) -> u128 {
    let scaled: BigUint = BigUint::from(p) << 256u32;
    let root = scaled.sqrt(); // floor(sqrt(p) * 2^128)
    let int_part = &root >> 128u32;
    let frac = root - (int_part << 128u32);
    let digits = frac.to_u64_digits();
    let lo = digits.first().copied().unwrap_or(0) as u128;
    let hi = digits.get(1).copied().unwrap_or(0) as u128;
    debug_assert!(digits.len() <= 2);
    (hi << 64) | lo
}

/// Round 128 fractional bits to the nearest 64-bit fraction; a carry out of
/// the top wraps to 0, which is correct modulo 1.
fn round_frac128(frac: u128) -> TorusCoord {
    let hi = (frac >> 64) as u64;
    let round_up = (frac >> 63) & 1 == 1;
    TorusCoord::from_raw(if round_up { hi.wrapping_add(1) } else { hi })
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference words computed independently with 50-digit arithmetic:
    // phi * 2^64        = 11400714819323198485.95...
    // (sqrt(2)-1)*2^64  =  7640891576956012808.69...
    // (sqrt(3)-1)*2^64  = 13503953896175478587.14...
    #[test]
    fn golden_rounds_to_the_known_word() {
        assert_eq!(AngleSpec::golden().coord().raw(), 11400714819323198486);
    }

    #[test]
    fn sqrt_prime_fractions_match_reference() {
        assert_eq!(
            AngleSpec::sqrt_prime(2).unwrap().coord().raw(),
            7640891576956012809
        );
        assert_eq!(
            AngleSpec::sqrt_prime(3).unwrap().coord().raw(),
            13503953896175478587
        );
    }

    #[test]
    fn golden_float_view() {
        assert!((AngleSpec::golden().value() - 0.618033988749894848).abs() < 1e-15);
    }

    #[test]
    fn composite_radicand_rejected() {
        assert_eq!(
            AngleSpec::sqrt_prime(12),
            Err(DynamicsError::NotPrime { p: 12 })
        );
        assert_eq!(
            AngleSpec::sqrt_prime(1),
            Err(DynamicsError::NotPrime { p: 1 })
        );
    }

    #[test]
    fn explicit_zero_rejected() {
        assert_eq!(AngleSpec::explicit(0.0), Err(DynamicsError::InvalidAngle));
        assert_eq!(AngleSpec::explicit(2.0), Err(DynamicsError::InvalidAngle));
        assert!(AngleSpec::explicit(0.25).is_ok());
    }

    #[test]
    fn independence_by_construction_rules() {
        let golden = AngleSpec::golden();
        let s2 = AngleSpec::sqrt_prime(2).unwrap();
        let s5 = AngleSpec::sqrt_prime(5).unwrap();
        let e = AngleSpec::explicit(0.25).unwrap();
        assert!(rationally_independent_by_construction(&[golden, s2]));
        assert!(rationally_independent_by_construction(&[s2, s5]));
        // golden is affine in sqrt(5): sharing the prime is a dependency.
        assert!(!rationally_independent_by_construction(&[golden, s5]));
        assert!(!rationally_independent_by_construction(&[s2, s2]));
        assert!(!rationally_independent_by_construction(&[golden, e]));
        assert!(!rationally_independent_by_construction(&[]));
    }

    #[test]
    fn rotation_is_exact_addition() {
        let quarter = AngleSpec::explicit(0.25).unwrap();
        let w = quarter.apply(TorusCoord::HALF);
        assert_eq!(w.to_f64(), 0.75);
    }
}
