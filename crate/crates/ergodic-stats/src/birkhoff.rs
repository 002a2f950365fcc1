use num_complex::Complex64;

use dynamics_core::{ProductSystem, SystemPoint};

use crate::error::StatsError;
use crate::observable::Observable;

/// Kahan-compensated complex accumulator. Accumulation order is the orbit
/// order, fixed and serial, so sums are bit-reproducible.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanComplex {
    sum_re: f64,
    sum_im: f64,
    comp_re: f64,
    comp_im: f64,
}

impl KahanComplex {
    pub fn add(&mut self, v: Complex64) {
        let y = v.re - self.comp_re;
        let t = self.sum_re + y;
        self.comp_re = (t - self.sum_re) - y;
        self.sum_re = t;

        let y = v.im - self.comp_im;
        let t = self.sum_im + y;
        self.comp_im = (t - self.sum_im) - y;
        self.sum_im = t;
    }

    pub fn mean(&self, n: u64) -> Complex64 {
        Complex64::new(self.sum_re / n as f64, self.sum_im / n as f64)
    }
}

/// Kahan-compensated real accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanF64 {
    sum: f64,
    comp: f64,
}

impl KahanF64 {
    pub fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn mean(&self, n: u64) -> f64 {
        self.sum / n as f64
    }
}

/// The Birkhoff average `(1/N) sum_{j<N} obs(f^j p0)`.
pub fn birkhoff_average(
    system: &ProductSystem,
    p0: &SystemPoint,
    obs: &Observable,
    samples: u64,
) -> Result<Complex64, StatsError> {
    if samples == 0 {
        return Err(StatsError::EmptySample);
    }
    // Evaluate once up front so shape errors surface before the long loop.
    obs.evaluate(p0)?;
    let mut acc = KahanComplex::default();
    system.visit_orbit(p0, samples, |p| {
        acc.add(obs.evaluate(p).expect("shape was validated on p0"));
    })?;
    Ok(acc.mean(samples))
}
