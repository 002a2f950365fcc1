use std::f64::consts::TAU;

use num_complex::Complex64;

use dynamics_core::trig::{cos_two_pi, sin_cos_two_pi, sin_two_pi};
use dynamics_core::SystemPoint;
use lattice_fourier::FrequencyIndex;

use crate::error::StatsError;

/// A bounded test function on the product space. Characters and their finite
/// linear combinations are the workhorses, mirroring the Fourier structure of
/// the dynamics; a few named coordinate functions cover the non-polynomial
/// case.
#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    /// `e^{2 pi i (m x + n y + <k, w> + j z)}`.
    Character(FrequencyIndex),
    /// A finite combination `sum_t c_t * character_t`.
    TrigPolynomial(Vec<(FrequencyIndex, Complex64)>),
    Builtin(BuiltinObservable),
}

/// Named smooth coordinate observables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinObservable {
    /// cos(2 pi x) on the first torus coordinate.
    CosX,
    /// sin(2 pi y) on the second torus coordinate.
    SinY,
    /// cos(2 pi z) on the center coordinate.
    CosZ,
}

/// A Lipschitz constant for the observable in the max metric on the product
/// of circles. Closed form for characters and trig polynomials; a sampled
/// estimate (flagged) for built-ins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzBound {
    pub value: f64,
    pub estimated: bool,
}

impl Observable {
    /// The constant observable `c` (a trig polynomial on the zero index,
    /// usable on points with or without a center coordinate).
    pub fn constant(c: Complex64) -> Self {
        Observable::TrigPolynomial(vec![(FrequencyIndex::new(0, 0, vec![], None), c)])
    }

    pub fn evaluate(&self, p: &SystemPoint) -> Result<Complex64, StatsError> {
        match self {
            Observable::Character(index) => character_value(index, p),
            Observable::TrigPolynomial(terms) => {
                let mut sum = Complex64::new(0.0, 0.0);
                for (index, coeff) in terms {
                    sum += coeff * character_value(index, p)?;
                }
                Ok(sum)
            }
            Observable::Builtin(b) => b.evaluate(p),
        }
    }

    /// An upper bound `P` on `sup |obs|`: 1 for characters and built-ins,
    /// the sum of coefficient moduli for trig polynomials.
    pub fn sup_norm(&self) -> f64 {
        match self {
            Observable::Character(_) => 1.0,
            Observable::TrigPolynomial(terms) => terms.iter().map(|(_, c)| c.norm()).sum(),
            Observable::Builtin(_) => 1.0,
        }
    }

    /// Modulus-of-continuity constant: `|obs(a) - obs(b)| <= L * d(a, b)` in
    /// the max metric over circle coordinates.
    pub fn lipschitz(&self) -> LipschitzBound {
        match self {
            Observable::Character(index) => LipschitzBound {
                value: TAU * index.l1_norm(),
                estimated: false,
            },
            Observable::TrigPolynomial(terms) => LipschitzBound {
                value: terms
                    .iter()
                    .map(|(index, c)| c.norm() * TAU * index.l1_norm())
                    .sum(),
                estimated: false,
            },
            Observable::Builtin(b) => LipschitzBound {
                value: b.estimated_lipschitz(),
                estimated: true,
            },
        }
    }
}

fn character_value(index: &FrequencyIndex, p: &SystemPoint) -> Result<Complex64, StatsError> {
    if !index.k.is_empty() && index.k.len() != p.w.len() {
        return Err(StatsError::FrequencyArityMismatch {
            frequency: index.k.len(),
            point: p.w.len(),
        });
    }
    // The torus part of the phase is exact on the fixed-point grid.
    let mut torus_phase = p.x.scale(index.m) + p.y.scale(index.n);
    for (w, &k) in p.w.iter().zip(&index.k) {
        torus_phase += w.scale(k);
    }
    let mut phase = torus_phase.to_f64();
    let j = index.j.unwrap_or(0);
    if j != 0 {
        let z = p.z.ok_or(StatsError::MissingCenterCoordinate)?;
        phase += j as f64 * z;
    }
    let (s, c) = sin_cos_two_pi(phase);
    Ok(Complex64::new(c, s))
}

impl BuiltinObservable {
    fn evaluate(&self, p: &SystemPoint) -> Result<Complex64, StatsError> {
        let v = match self {
            BuiltinObservable::CosX => cos_two_pi(p.x.to_f64()),
            BuiltinObservable::SinY => sin_two_pi(p.y.to_f64()),
            BuiltinObservable::CosZ => {
                let z = p.z.ok_or(StatsError::MissingCenterCoordinate)?;
                cos_two_pi(z)
            }
        };
        Ok(Complex64::new(v, 0.0))
    }

    /// Sampled bound on the coordinate derivative, padded by 5%. The true
    /// constant for all three is 2 pi; the estimate exists to exercise the
    /// flagged non-closed-form path.
    fn estimated_lipschitz(&self) -> f64 {
        let probes = 4096;
        let mut max_slope: f64 = 0.0;
        let step = 1.0 / probes as f64;
        for i in 0..probes {
            let t = i as f64 * step;
            let (a, b) = match self {
                // All built-ins reduce to a scalar function of one angle.
                BuiltinObservable::CosX | BuiltinObservable::CosZ => {
                    (cos_two_pi(t), cos_two_pi(t + step))
                }
                BuiltinObservable::SinY => (sin_two_pi(t), sin_two_pi(t + step)),
            };
            max_slope = max_slope.max(((b - a) / step).abs());
        }
        max_slope * 1.05
    }
}
