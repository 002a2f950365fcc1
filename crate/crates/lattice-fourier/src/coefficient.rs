use num_complex::Complex64;

use dynamics_core::trig::sin_cos_two_pi;
use dynamics_core::{AngleSpec, CatMap};

use crate::error::LatticeError;
use crate::index::index_step;
use crate::margin::frequency_dot;

/// The coefficient recursion induced by composing characters with the
/// product map: the coefficient at the stepped torus index equals the
/// coefficient at the original index times the unit phase
/// `e^{2 pi i <alpha, k>}`. Coefficient moduli are therefore constant along
/// every index orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientRelation {
    cat: CatMap,
    k: Vec<i64>,
    phase: Complex64,
}

impl CoefficientRelation {
    pub fn new(
        cat: &CatMap,
        rotations: &[AngleSpec],
        k: &[i64],
    ) -> Result<Self, LatticeError> {
        if k.len() != rotations.len() {
            return Err(LatticeError::FrequencyArityMismatch {
                frequency: k.len(),
                rotations: rotations.len(),
            });
        }
        // <alpha, k> is computed exactly on the fixed-point grid, then
        // evaluated once in floating point.
        let dot = frequency_dot(rotations, k);
        let (s, c) = sin_cos_two_pi(dot.to_f64());
        Ok(CoefficientRelation {
            cat: *cat,
            k: k.to_vec(),
            phase: Complex64::new(c, s),
        })
    }

    /// The unit phase `e^{2 pi i <alpha, k>}`.
    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    pub fn rotation_frequency(&self) -> &[i64] {
        &self.k
    }

    /// The torus index map this relation transports along.
    pub fn step_index(&self, m: i64, n: i64) -> Result<(i64, i64), LatticeError> {
        index_step(m, n, &self.cat)
    }

    /// Coefficient at the stepped index given the coefficient at `(m, n)`.
    pub fn transport(&self, coefficient: Complex64) -> Complex64 {
        self.phase * coefficient
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dynamics_core::AngleSpec;

    #[test]
    fn phase_is_unit_modulus() {
        let cat = CatMap::default();
        let rot = vec![AngleSpec::golden()];
        let rel = CoefficientRelation::new(&cat, &rot, &[3]).unwrap();
        assert!((rel.phase().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn transport_preserves_modulus_along_orbits() {
        let cat = CatMap::default();
        let rot = vec![AngleSpec::golden(), AngleSpec::sqrt_prime(2).unwrap()];
        let rel = CoefficientRelation::new(&cat, &rot, &[1, -2]).unwrap();
        let mut coeff = Complex64::new(0.6, -0.8);
        let start_modulus = coeff.norm();
        let mut idx = (1i64, 0i64);
        for _ in 0..40 {
            idx = rel.step_index(idx.0, idx.1).unwrap();
            coeff = rel.transport(coeff);
            assert!((coeff.norm() - start_modulus).abs() < 1e-12);
        }
    }

    #[test]
    fn arity_mismatch_rejected() {
        let cat = CatMap::default();
        let rot = vec![AngleSpec::golden()];
        assert!(matches!(
            CoefficientRelation::new(&cat, &rot, &[1, 2]),
            Err(LatticeError::FrequencyArityMismatch { .. })
        ));
    }
}
