//! Trigonometry on circle-valued arguments.
//!
//! Arguments are given in turns (full revolutions), reduced symmetrically to
//! [-1/2, 1/2] before multiplying by 2*pi. The reduction `t - round(t)` is
//! exact in `f64` for |t| < 2^52, so integer turns map to sine exactly 0 and
//! cosine exactly 1, and accuracy does not degrade near the wrap point.

use std::f64::consts::TAU;

/// `sin(2*pi*t)` with symmetric argument reduction.
pub fn sin_two_pi(t: f64) -> f64 {
    (TAU * reduce(t)).sin()
}

/// `cos(2*pi*t)` with symmetric argument reduction.
pub fn cos_two_pi(t: f64) -> f64 {
    (TAU * reduce(t)).cos()
}

/// `(sin, cos)` of `2*pi*t` with symmetric argument reduction.
pub fn sin_cos_two_pi(t: f64) -> (f64, f64) {
    (TAU * reduce(t)).sin_cos()
}

fn reduce(t: f64) -> f64 {
    t - t.round()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_turns_are_exact() {
        for t in [0.0, 1.0, -1.0, 2.0, 1234.0] {
            assert_eq!(sin_two_pi(t), 0.0);
            assert_eq!(cos_two_pi(t), 1.0);
        }
    }

    #[test]
    fn quarter_turns() {
        assert!((sin_two_pi(0.25) - 1.0).abs() < 1e-15);
        assert!(cos_two_pi(0.25).abs() < 1e-15);
        assert!((cos_two_pi(0.5) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn reduction_matches_unreduced_sine() {
        for i in 0..100 {
            let t = i as f64 * 0.0137;
            assert!((sin_two_pi(t) - (TAU * t).sin()).abs() < 1e-12);
        }
    }
}
