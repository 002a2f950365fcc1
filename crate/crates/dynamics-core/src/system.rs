use crate::angle::AngleSpec;
use crate::cat::CatMap;
use crate::error::DynamicsError;
use crate::morse_smale::MorseSmaleMap;
use crate::torus::TorusCoord;

/// A point of T^2 x (S^1)^r x S^1. The torus and rotation coordinates are
/// exact fixed-point fractions; the center coordinate (absent for systems
/// without a center factor) is a float in [0,1).
#[derive(Debug, Clone, PartialEq)]
pub struct SystemPoint {
    pub x: TorusCoord,
    pub y: TorusCoord,
    pub w: Vec<TorusCoord>,
    pub z: Option<f64>,
}

impl SystemPoint {
    /// A point of a system without a center factor.
    pub fn without_center(x: TorusCoord, y: TorusCoord, w: Vec<TorusCoord>) -> Self {
        SystemPoint { x, y, w, z: None }
    }

    /// A point of a system with a center factor.
    pub fn with_center(x: TorusCoord, y: TorusCoord, w: Vec<TorusCoord>, z: f64) -> Self {
        SystemPoint {
            x,
            y,
            w,
            z: Some(z),
        }
    }

    pub fn rotation_count(&self) -> usize {
        self.w.len()
    }
}

/// The splitting data of the constant-cocycle product: `E^u` is the unstable
/// eigendirection of the matrix, `F` is everything else, and the domination
/// constants are `C = 1`, `lambda = sup_center / lambda_u` in the Euclidean
/// product metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialHyperbolicityCertificate {
    /// Unstable eigenvalue modulus of the torus automorphism.
    pub lambda_u: f64,
    /// Largest expansion inside the dominated bundle: `max(1, sup |h'|)`.
    pub sup_center: f64,
    /// Domination prefactor; 1 for these constant-block products.
    pub c: f64,
    /// Domination rate `sup_center / lambda_u`, strictly below 1.
    pub lambda: f64,
}

/// The product system `A x rotations (x h)`: a hyperbolic automorphism on
/// T^2, at least one circle rotation, and an optional Morse-Smale center
/// factor. Construction enforces the partial hyperbolicity margin
/// `(1 + eps) / lambda_u < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSystem {
    cat: CatMap,
    rotations: Vec<AngleSpec>,
    center: Option<MorseSmaleMap>,
}

impl ProductSystem {
    pub fn new(
        cat: CatMap,
        rotations: Vec<AngleSpec>,
        center: Option<MorseSmaleMap>,
    ) -> Result<Self, DynamicsError> {
        if rotations.is_empty() {
            return Err(DynamicsError::NoRotations);
        }
        let system = ProductSystem {
            cat,
            rotations,
            center,
        };
        system.partial_hyperbolicity_certificate()?;
        Ok(system)
    }

    /// The volume-preserving product with no center factor.
    pub fn without_center(
        cat: CatMap,
        rotations: Vec<AngleSpec>,
    ) -> Result<Self, DynamicsError> {
        ProductSystem::new(cat, rotations, None)
    }

    /// The default system: matrix ((2,1),(1,1)), one golden rotation, and a
    /// center factor with `sinks` sinks, eps = 1/2, phase = 0.
    pub fn default_with_center(sinks: u32) -> Result<Self, DynamicsError> {
        let center = MorseSmaleMap::new(sinks, 0.5, TorusCoord::ZERO)?;
        ProductSystem::new(CatMap::default(), vec![AngleSpec::golden()], Some(center))
    }

    /// The default base system: matrix ((2,1),(1,1)) with one golden
    /// rotation.
    pub fn default_without_center() -> Self {
        ProductSystem::without_center(CatMap::default(), vec![AngleSpec::golden()])
            .expect("default system is partially hyperbolic")
    }

    pub fn cat(&self) -> &CatMap {
        &self.cat
    }

    pub fn rotations(&self) -> &[AngleSpec] {
        &self.rotations
    }

    pub fn rotation_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn center(&self) -> Option<&MorseSmaleMap> {
        self.center.as_ref()
    }

    pub fn has_center(&self) -> bool {
        self.center.is_some()
    }

    /// Check that a point has the right shape for this system.
    pub fn validate_point(&self, p: &SystemPoint) -> Result<(), DynamicsError> {
        if p.w.len() != self.rotations.len() {
            return Err(DynamicsError::RotationArityMismatch {
                point: p.w.len(),
                system: self.rotations.len(),
            });
        }
        match (p.z, &self.center) {
            (Some(z), Some(_)) => {
                if !(0.0..1.0).contains(&z) {
                    return Err(DynamicsError::CenterOutOfRange { z });
                }
            }
            (None, None) => {}
            (Some(_), None) => {
                return Err(DynamicsError::CenterMismatch {
                    point_has: "",
                    system_has: "not ",
                })
            }
            (None, Some(_)) => {
                return Err(DynamicsError::CenterMismatch {
                    point_has: "not ",
                    system_has: "",
                })
            }
        }
        Ok(())
    }

    /// One step of the product dynamics.
    pub fn step(&self, p: &SystemPoint) -> Result<SystemPoint, DynamicsError> {
        self.validate_point(p)?;
        let mut next = p.clone();
        self.step_in_place(&mut next);
        Ok(next)
    }

    /// One step without validation or allocation; callers must have
    /// validated the point shape once up front.
    pub fn step_in_place(&self, p: &mut SystemPoint) {
        let (x, y) = self.cat.apply(p.x, p.y);
        p.x = x;
        p.y = y;
        for (w, alpha) in p.w.iter_mut().zip(&self.rotations) {
            *w = alpha.apply(*w);
        }
        if let Some(h) = &self.center {
            let z = p.z.expect("validated point has a center coordinate");
            p.z = Some(h.apply(z));
        }
    }

    /// A streaming orbit: yields `samples` points starting at `p0`, applying
    /// the map `stride` times between consecutive samples. Torus and rotation
    /// coordinates are bit-reproducible across runs and thread counts.
    pub fn orbit(
        &self,
        p0: SystemPoint,
        samples: u64,
        stride: u64,
    ) -> Result<OrbitIter<'_>, DynamicsError> {
        if samples == 0 || stride == 0 {
            return Err(DynamicsError::EmptyOrbit);
        }
        self.validate_point(&p0)?;
        Ok(OrbitIter {
            system: self,
            current: p0,
            remaining: samples,
            stride,
        })
    }

    /// Visit `samples` orbit points in order without allocating per sample.
    pub fn visit_orbit<F: FnMut(&SystemPoint)>(
        &self,
        p0: &SystemPoint,
        samples: u64,
        mut visit: F,
    ) -> Result<(), DynamicsError> {
        self.validate_point(p0)?;
        let mut p = p0.clone();
        for i in 0..samples {
            if i > 0 {
                self.step_in_place(&mut p);
            }
            visit(&p);
        }
        Ok(())
    }

    /// The exact Lyapunov spectrum of the product at a physical measure,
    /// sorted ascending: `{-log lambda_u, +log lambda_u}` from the matrix,
    /// one zero per rotation factor, and `log(1 - eps)` on the center factor
    /// at a sink. For this center family every sink has the same derivative,
    /// so `sink_index` only selects (and bounds-checks) which measure is
    /// meant; it is ignored when there is no center.
    pub fn analytic_lyapunov_spectrum(
        &self,
        sink_index: Option<usize>,
    ) -> Result<Vec<f64>, DynamicsError> {
        let log_lambda = self.cat.log_lambda_u();
        let mut spectrum = vec![-log_lambda, log_lambda];
        spectrum.extend(std::iter::repeat(0.0).take(self.rotations.len()));
        if let Some(h) = &self.center {
            let sinks = h.sink_count() as usize;
            let index = sink_index.unwrap_or(0);
            if index >= sinks {
                return Err(DynamicsError::SinkIndexOutOfRange { index, sinks });
            }
            spectrum.push((1.0 - h.epsilon()).ln());
        }
        spectrum.sort_by(f64::total_cmp);
        Ok(spectrum)
    }

    /// Constants witnessing partial hyperbolicity in the Euclidean product
    /// metric; fails when `sup_center / lambda_u >= 1`.
    pub fn partial_hyperbolicity_certificate(
        &self,
    ) -> Result<PartialHyperbolicityCertificate, DynamicsError> {
        let lambda_u = self.cat.lambda_u();
        let sup_center = match &self.center {
            Some(h) => 1.0 + h.epsilon(),
            None => 1.0,
        };
        let lambda = sup_center / lambda_u;
        if !(lambda < 1.0) {
            return Err(DynamicsError::NotPartiallyHyperbolic { lambda });
        }
        Ok(PartialHyperbolicityCertificate {
            lambda_u,
            sup_center,
            c: 1.0,
            lambda,
        })
    }
}

/// Iterator over orbit samples; see [`ProductSystem::orbit`].
pub struct OrbitIter<'a> {
    system: &'a ProductSystem,
    current: SystemPoint,
    remaining: u64,
    stride: u64,
}

impl Iterator for OrbitIter<'_> {
    type Item = SystemPoint;

    fn next(&mut self) -> Option<SystemPoint> {
        if self.remaining == 0 {
            return None;
        }
        let out = self.current.clone();
        self.remaining -= 1;
        if self.remaining > 0 {
            for _ in 0..self.stride {
                self.system.step_in_place(&mut self.current);
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).ok();
        (n.unwrap_or(usize::MAX), n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::AngleSpec;

    fn quarter_system() -> ProductSystem {
        ProductSystem::without_center(
            CatMap::default(),
            vec![AngleSpec::explicit(0.25).unwrap()],
        )
        .unwrap()
    }

    #[test]
    fn origin_steps_by_rotation_only() {
        let f = quarter_system();
        let p0 = SystemPoint::without_center(TorusCoord::ZERO, TorusCoord::ZERO, vec![
            TorusCoord::ZERO,
        ]);
        let p1 = f.step(&p0).unwrap();
        assert_eq!(p1.x, TorusCoord::ZERO);
        assert_eq!(p1.y, TorusCoord::ZERO);
        assert_eq!(p1.w[0].to_f64(), 0.25);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let f = quarter_system();
        let bad = SystemPoint::without_center(TorusCoord::ZERO, TorusCoord::ZERO, vec![]);
        assert!(matches!(
            f.step(&bad),
            Err(DynamicsError::RotationArityMismatch { .. })
        ));
        let bad_center =
            SystemPoint::with_center(TorusCoord::ZERO, TorusCoord::ZERO, vec![TorusCoord::ZERO], 0.5);
        assert!(matches!(
            f.step(&bad_center),
            Err(DynamicsError::CenterMismatch { .. })
        ));
    }

    #[test]
    fn sink_slice_is_exactly_invariant() {
        let g = ProductSystem::default_with_center(1).unwrap();
        let sink = g.center().unwrap().sinks()[0].position;
        let mut p = SystemPoint::with_center(
            TorusCoord::from_f64(0.3),
            TorusCoord::from_f64(0.7),
            vec![TorusCoord::ZERO],
            sink,
        );
        for _ in 0..1000 {
            g.step_in_place(&mut p);
            assert_eq!(p.z, Some(sink));
        }
    }

    #[test]
    fn three_steps_match_scalar_reimplementation() {
        // Independent scalar oracle: raw u64 recurrences written out by hand
        // for the default g with one sink, against the library step.
        let g = ProductSystem::default_with_center(1).unwrap();
        let alpha = g.rotations()[0].coord().raw();
        let p0 = SystemPoint::with_center(
            TorusCoord::HALF,
            TorusCoord::HALF,
            vec![TorusCoord::ZERO],
            0.25,
        );

        let (mut x, mut y, mut w) = (p0.x.raw(), p0.y.raw(), p0.w[0].raw());
        let mut z = 0.25f64;
        let h = g.center().unwrap();
        for _ in 0..3 {
            let nx = x.wrapping_mul(2).wrapping_add(y);
            let ny = x.wrapping_add(y);
            x = nx;
            y = ny;
            w = w.wrapping_add(alpha);
            z = {
                use std::f64::consts::TAU;
                let t = z - 0.0;
                let r = t - t.round();
                (z + 0.5 / TAU * (TAU * r).sin()).rem_euclid(1.0)
            };
        }

        let mut p = p0;
        for _ in 0..3 {
            g.step_in_place(&mut p);
        }
        assert_eq!(p.x.raw(), x);
        assert_eq!(p.y.raw(), y);
        assert_eq!(p.w[0].raw(), w);
        assert!((p.z.unwrap() - z).abs() < 1e-15);
    }

    #[test]
    fn orbit_of_one_sample_is_the_start() {
        let f = quarter_system();
        let p0 = SystemPoint::without_center(
            TorusCoord::from_f64(0.1),
            TorusCoord::from_f64(0.2),
            vec![TorusCoord::ZERO],
        );
        let pts: Vec<_> = f.orbit(p0.clone(), 1, 1).unwrap().collect();
        assert_eq!(pts, vec![p0]);
    }

    #[test]
    fn stride_two_subsamples_stride_one() {
        let f = quarter_system();
        let p0 = SystemPoint::without_center(
            TorusCoord::from_f64(0.1),
            TorusCoord::from_f64(0.2),
            vec![TorusCoord::ZERO],
        );
        let dense: Vec<_> = f.orbit(p0.clone(), 5, 1).unwrap().collect();
        let coarse: Vec<_> = f.orbit(p0, 3, 2).unwrap().collect();
        assert_eq!(coarse, vec![dense[0].clone(), dense[2].clone(), dense[4].clone()]);
    }

    #[test]
    fn zero_samples_rejected() {
        let f = quarter_system();
        let p0 = SystemPoint::without_center(TorusCoord::ZERO, TorusCoord::ZERO, vec![
            TorusCoord::ZERO,
        ]);
        assert!(matches!(f.orbit(p0, 0, 1), Err(DynamicsError::EmptyOrbit)));
    }

    #[test]
    fn spectrum_of_default_f() {
        let f = ProductSystem::default_without_center();
        let spec = f.analytic_lyapunov_spectrum(None).unwrap();
        let expected = 0.9624236501192069; // ln((3+sqrt(5))/2), 50-digit reference
        assert_eq!(spec.len(), 3);
        assert!((spec[0] + expected).abs() < 1e-12);
        assert_eq!(spec[1], 0.0);
        assert!((spec[2] - expected).abs() < 1e-12);
    }

    #[test]
    fn spectrum_of_default_g_adds_center_exponent() {
        let g = ProductSystem::default_with_center(2).unwrap();
        let spec = g.analytic_lyapunov_spectrum(Some(1)).unwrap();
        assert_eq!(spec.len(), 4);
        assert!((spec[1] - 0.5f64.ln()).abs() < 1e-12);
        assert!(matches!(
            g.analytic_lyapunov_spectrum(Some(2)),
            Err(DynamicsError::SinkIndexOutOfRange { index: 2, sinks: 2 })
        ));
    }

    #[test]
    fn spectrum_exponents_multiply_to_volume_factor() {
        let f = ProductSystem::default_without_center();
        let sum: f64 = f.analytic_lyapunov_spectrum(None).unwrap().iter().sum();
        assert!(sum.abs() < 1e-12, "f preserves volume");

        let g = ProductSystem::default_with_center(3).unwrap();
        let sum: f64 = g.analytic_lyapunov_spectrum(Some(0)).unwrap().iter().sum();
        assert!((sum.exp() - 0.5).abs() < 1e-12, "g contracts by 1-eps at a sink");
    }

    #[test]
    fn certificate_constants() {
        let g = ProductSystem::default_with_center(1).unwrap();
        let cert = g.partial_hyperbolicity_certificate().unwrap();
        assert_eq!(cert.c, 1.0);
        assert!((cert.lambda - 0.5729490168751577).abs() < 1e-12);
        assert!((cert.sup_center - 1.5).abs() < 1e-15);

        let f = ProductSystem::default_without_center();
        let cert = f.partial_hyperbolicity_certificate().unwrap();
        assert!((cert.lambda - 0.3819660112501051).abs() < 1e-12);
    }

    #[test]
    fn conjugate_matrix_gives_identical_certificate() {
        let g1 = ProductSystem::default_with_center(1).unwrap();
        let m = CatMap::new(1, 1, 1, 2).unwrap();
        let center = MorseSmaleMap::new(1, 0.5, TorusCoord::ZERO).unwrap();
        let g2 = ProductSystem::new(m, vec![AngleSpec::golden()], Some(center)).unwrap();
        let c1 = g1.partial_hyperbolicity_certificate().unwrap();
        let c2 = g2.partial_hyperbolicity_certificate().unwrap();
        assert_eq!(c1, c2);
    }
}
