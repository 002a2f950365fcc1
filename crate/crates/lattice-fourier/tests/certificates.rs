//! Certificate-level invariants: modulus transport along index orbits,
//! completeness of the enumeration, and the JSON form consumed by the
//! experiment harness.

use dynamics_core::{AngleSpec, CatMap, ProductSystem};
use lattice_fourier::{
    ergodicity_certificate, escape_certificate, CoefficientRelation, ErgodicityCertificate,
    DEFAULT_MARGIN_FLOOR, DEFAULT_STEP_BUDGET,
};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn full_box_fifty_certificate() {
    // The acceptance-scale run: box 50 has (2*50+1)^2 - 1 = 10200 indices,
    // all escaping within 9 steps (value pinned by the inline brute force in
    // the escape module's tests).
    let cert = escape_certificate(&CatMap::default(), 50, DEFAULT_STEP_BUDGET).unwrap();
    assert_eq!(cert.index_count(), 10200);
    assert!(cert.passed());
    assert_eq!(cert.max_steps, 9);
}

#[test]
fn certificate_serializes_to_json_and_back() {
    let f = ProductSystem::default_without_center();
    let cert = ergodicity_certificate(&f, 5, 3, DEFAULT_MARGIN_FLOOR, DEFAULT_STEP_BUDGET).unwrap();
    let json = serde_json::to_string(&cert).unwrap();
    let back: ErgodicityCertificate = serde_json::from_str(&json).unwrap();
    assert_eq!(cert, back);
    assert!(json.contains("\"min_margin\""));
}

proptest! {
    /// Unit phases transport coefficients without changing their modulus,
    /// for arbitrary rotation frequencies and coefficients.
    #[test]
    fn modulus_is_constant_along_index_orbits(
        k1 in -20i64..21,
        k2 in -20i64..21,
        re in -2.0f64..2.0,
        im in -2.0f64..2.0,
        steps in 1usize..60,
    ) {
        let cat = CatMap::default();
        let rotations = vec![AngleSpec::golden(), AngleSpec::sqrt_prime(3).unwrap()];
        let rel = CoefficientRelation::new(&cat, &rotations, &[k1, k2]).unwrap();
        prop_assert!((rel.phase().norm() - 1.0).abs() < 1e-15);
        let mut coeff = Complex64::new(re, im);
        let modulus = coeff.norm();
        for _ in 0..steps {
            coeff = rel.transport(coeff);
        }
        prop_assert!((coeff.norm() - modulus).abs() < 1e-12);
    }

    /// Escape step counts are invariant under index negation: the map is
    /// linear, so (m, n) and (-m, -n) share an escape time.
    #[test]
    fn escape_steps_symmetric_under_negation(bound in 1i64..12) {
        let cert = escape_certificate(&CatMap::default(), bound, DEFAULT_STEP_BUDGET).unwrap();
        for entry in &cert.entries {
            let twin = cert
                .entries
                .iter()
                .find(|e| (e.m, e.n) == (-entry.m, -entry.n))
                .expect("negated index is in the box");
            prop_assert_eq!(entry.steps, twin.steps);
        }
    }
}
