use std::f64::consts::TAU;

use crate::error::DynamicsError;
use crate::torus::TorusCoord;
use crate::trig::{cos_two_pi, sin_two_pi};

/// A Morse-Smale circle diffeomorphism with `ell` sinks and `ell` sources,
/// realized as
///
/// ```text
/// h(z) = z + (eps / (2 pi ell)) * sin(2 pi ell (z - phase))   mod 1
/// ```
///
/// The derivative `h'(z) = 1 + eps cos(2 pi ell (z - phase))` stays in
/// `[1-eps, 1+eps] ⊂ (0, 2)`, so `h` is an orientation-preserving
/// diffeomorphism. Its non-wandering set is exactly the `2 ell` fixed points
/// `phase + k/(2 ell)`: sources at even `k` (derivative `1+eps`), sinks at
/// odd `k` (derivative `1-eps`), alternating around the circle. This family
/// is used because fixed points, derivatives and basins all have closed
/// forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseSmaleMap {
    sinks: u32,
    epsilon: f64,
    phase: TorusCoord,
}

/// Stability type of a fixed point of the center map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixedPointKind {
    Sink,
    Source,
}

/// A fixed point of the center map, with its position in [0,1) and the
/// derivative of the map there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    pub position: f64,
    pub kind: FixedPointKind,
    pub derivative: f64,
}

impl MorseSmaleMap {
    pub fn new(sinks: u32, epsilon: f64, phase: TorusCoord) -> Result<Self, DynamicsError> {
        if sinks == 0 {
            return Err(DynamicsError::ZeroSinks);
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(DynamicsError::InvalidEpsilon { epsilon });
        }
        Ok(MorseSmaleMap {
            sinks,
            epsilon,
            phase,
        })
    }

    /// Number of sinks (= number of sources).
    pub fn sink_count(&self) -> u32 {
        self.sinks
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn phase(&self) -> TorusCoord {
        self.phase
    }

    /// One application of the map; the result is wrapped into [0,1).
    pub fn apply(&self, z: f64) -> f64 {
        let ell = self.sinks as f64;
        let t = ell * (z - self.phase.to_f64());
        wrap_unit(z + self.epsilon / (TAU * ell) * sin_two_pi(t))
    }

    /// Derivative `1 + eps cos(2 pi ell (z - phase))`, always positive.
    pub fn derivative(&self, z: f64) -> f64 {
        let ell = self.sinks as f64;
        1.0 + self.epsilon * cos_two_pi(ell * (z - self.phase.to_f64()))
    }

    /// The `2 ell` fixed points sorted by position.
    pub fn fixed_points(&self) -> Vec<FixedPoint> {
        let two_ell = 2 * self.sinks;
        let phase = self.phase.to_f64();
        let mut points: Vec<FixedPoint> = (0..two_ell)
            .map(|k| {
                let kind = if k % 2 == 0 {
                    FixedPointKind::Source
                } else {
                    FixedPointKind::Sink
                };
                let derivative = match kind {
                    FixedPointKind::Source => 1.0 + self.epsilon,
                    FixedPointKind::Sink => 1.0 - self.epsilon,
                };
                FixedPoint {
                    position: wrap_unit(phase + k as f64 / two_ell as f64),
                    kind,
                    derivative,
                }
            })
            .collect();
        points.sort_by(|p, q| p.position.total_cmp(&q.position));
        points
    }

    /// The sinks only, sorted by position. Indices into this list are the
    /// canonical sink labels used by basin classification.
    pub fn sinks(&self) -> Vec<FixedPoint> {
        self.fixed_points()
            .into_iter()
            .filter(|p| p.kind == FixedPointKind::Sink)
            .collect()
    }

    /// The sources only, sorted by position.
    pub fn sources(&self) -> Vec<FixedPoint> {
        self.fixed_points()
            .into_iter()
            .filter(|p| p.kind == FixedPointKind::Source)
            .collect()
    }
}

/// Wrap into [0,1); `rem_euclid` alone can return 1.0 when a negative input
/// rounds up.
pub(crate) fn wrap_unit(z: f64) -> f64 {
    let r = z.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(ell: u32, eps: f64) -> MorseSmaleMap {
        MorseSmaleMap::new(ell, eps, TorusCoord::ZERO).unwrap()
    }

    #[test]
    fn construction_guards() {
        assert_eq!(
            MorseSmaleMap::new(0, 0.5, TorusCoord::ZERO),
            Err(DynamicsError::ZeroSinks)
        );
        assert!(matches!(
            MorseSmaleMap::new(1, 1.0, TorusCoord::ZERO),
            Err(DynamicsError::InvalidEpsilon { .. })
        ));
        assert!(matches!(
            MorseSmaleMap::new(1, 0.0, TorusCoord::ZERO),
            Err(DynamicsError::InvalidEpsilon { .. })
        ));
    }

    #[test]
    fn origin_is_fixed_for_zero_phase() {
        assert_eq!(map(1, 0.5).apply(0.0), 0.0);
    }

    #[test]
    fn quarter_point_moves_by_amplitude() {
        // sin(2 pi * 0.25) = 1, so h(0.25) = 0.25 + 0.5/(2 pi).
        let h = map(1, 0.5);
        let expected = 0.329577471545947667884; // 0.25 + 0.5/(2 pi), 50-digit reference
        assert!((h.apply(0.25) - expected).abs() < 1e-15);
    }

    #[test]
    fn sink_of_two_sink_map_is_exactly_fixed() {
        // ell=2: sin(2 pi * 2 * 0.25) = sin(pi) = 0 under exact reduction.
        let h = map(2, 0.3);
        assert_eq!(h.apply(0.25), 0.25);
        assert!((h.derivative(0.25) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn fixed_points_alternate_and_carry_closed_form_derivatives() {
        let h = map(1, 0.5);
        let pts = h.fixed_points();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].position, 0.0);
        assert_eq!(pts[0].kind, FixedPointKind::Source);
        assert!((pts[0].derivative - 1.5).abs() < 1e-15);
        assert_eq!(pts[1].position, 0.5);
        assert_eq!(pts[1].kind, FixedPointKind::Sink);
        assert!((pts[1].derivative - 0.5).abs() < 1e-15);

        let h = map(2, 0.3);
        let sinks = h.sinks();
        assert_eq!(sinks.len(), 2);
        assert_eq!(sinks[0].position, 0.25);
        assert_eq!(sinks[1].position, 0.75);
        let sources = h.sources();
        assert_eq!(sources[0].position, 0.0);
        assert_eq!(sources[1].position, 0.5);
    }

    #[test]
    fn phased_fixed_points_are_fixed_numerically() {
        // ell=3, phase=1/12: six points at 1/12 + k/6, alternating.
        let phase = TorusCoord::from_f64(1.0 / 12.0);
        let h = MorseSmaleMap::new(3, 0.4, phase).unwrap();
        let pts = h.fixed_points();
        assert_eq!(pts.len(), 6);
        for (i, p) in pts.iter().enumerate() {
            let expected = 1.0 / 12.0 + i as f64 / 6.0;
            assert!((p.position - expected).abs() < 1e-12);
            assert!((h.apply(p.position) - p.position).abs() < 1e-12);
        }
        // Order rotates with the phase but alternation survives sorting.
        for pair in pts.windows(2) {
            assert_ne!(pair[0].kind, pair[1].kind);
        }
    }

    #[test]
    fn derivative_bounds_make_it_a_diffeomorphism() {
        let h = map(4, 0.9);
        for i in 0..1000 {
            let z = i as f64 / 1000.0;
            let d = h.derivative(z);
            assert!(d > 0.0 && d >= 1.0 - 0.9 - 1e-12 && d <= 1.0 + 0.9 + 1e-12);
        }
    }
}
