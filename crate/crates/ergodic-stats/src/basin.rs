use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use dynamics_core::{ProductSystem, SystemPoint, TorusCoord};

use crate::error::StatsError;

/// Points starting closer than this to a source are reported `Unresolved`
/// instead of being pushed off the fence by floating-point noise.
pub const SOURCE_GUARD: f64 = 1e-9;

/// Outcome of basin classification: the index of a sink in the sorted sink
/// list of the center map, or unresolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasinClass {
    Sink(usize),
    Unresolved,
}

/// Decide which sink the orbit of `p0` converges to.
///
/// Because the dynamics is a product and the other factors never feed the
/// center coordinate, only `z` is iterated; the result is invariant under
/// the `x`, `y`, `w` coordinates by construction. A black-box version would
/// iterate the full system to the same outcome at r+2 times the cost.
pub fn classify_basin(
    system: &ProductSystem,
    p0: &SystemPoint,
    max_iter: u64,
    radius: f64,
) -> Result<BasinClass, StatsError> {
    let h = system.center().ok_or(StatsError::NeedsCenter)?;
    system.validate_point(p0)?;
    let mut z = p0.z.expect("validated point of a center system");

    let points = h.fixed_points();
    let sinks: Vec<f64> = points
        .iter()
        .filter(|p| p.kind == dynamics_core::FixedPointKind::Sink)
        .map(|p| p.position)
        .collect();
    let sources: Vec<f64> = points
        .iter()
        .filter(|p| p.kind == dynamics_core::FixedPointKind::Source)
        .map(|p| p.position)
        .collect();

    if sources.iter().any(|&u| circle_dist(z, u) < SOURCE_GUARD) {
        return Ok(BasinClass::Unresolved);
    }
    for _ in 0..=max_iter {
        for (i, &u) in sinks.iter().enumerate() {
            if circle_dist(z, u) < radius {
                return Ok(BasinClass::Sink(i));
            }
        }
        z = h.apply(z);
    }
    Ok(BasinClass::Unresolved)
}

pub(crate) fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Initial-condition source for surveys. Both variants are addressed purely
/// by sample index, so parallel scheduling cannot change which point any
/// index receives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sampler {
    /// Counter-based uniform sampling: sample `i` draws from an independent
    /// ChaCha8 stream `i` keyed by `seed`.
    Uniform { seed: u64 },
    /// An evenly spaced grid `z = i / total` on the center coordinate, with
    /// the rigid coordinates at 0. Deliberately includes exact fixed points
    /// when `total` is a multiple of `2 * ell` and the phase is 0.
    CenterGrid,
}

impl Sampler {
    pub fn sample(&self, system: &ProductSystem, index: u64, total: u64) -> SystemPoint {
        match self {
            Sampler::Uniform { seed } => {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(index);
                let x = TorusCoord::from_raw(rng.next_u64());
                let y = TorusCoord::from_raw(rng.next_u64());
                let w: Vec<TorusCoord> = (0..system.rotation_count())
                    .map(|_| TorusCoord::from_raw(rng.next_u64()))
                    .collect();
                let z = system
                    .has_center()
                    .then(|| (rng.next_u64() >> 11) as f64 * 2f64.powi(-53));
                SystemPoint { x, y, w, z }
            }
            Sampler::CenterGrid => {
                let z = system
                    .has_center()
                    .then(|| index as f64 / total.max(1) as f64);
                SystemPoint {
                    x: TorusCoord::ZERO,
                    y: TorusCoord::ZERO,
                    w: vec![TorusCoord::ZERO; system.rotation_count()],
                    z,
                }
            }
        }
    }
}

/// Survey results: per-sink hit counts with binomial error bars, plus the
/// unresolved remainder. Counts always satisfy
/// `sum(counts) + unresolved == total`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinkStat {
    pub sink_index: usize,
    pub position: f64,
    pub count: u64,
    pub fraction: f64,
    /// `3 sqrt(p(1-p)/n)` at the observed fraction.
    pub half_width_3sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinReport {
    pub sinks: Vec<SinkStat>,
    pub unresolved: u64,
    pub total: u64,
}

impl BasinReport {
    /// Number of sinks actually hit by at least one sample.
    pub fn sinks_found(&self) -> usize {
        self.sinks.iter().filter(|s| s.count > 0).count()
    }
}

/// Classify `n_samples` sampled initial conditions in parallel. Results are
/// keyed by sample index and reduced by integer counting, so the report is
/// identical for every worker count.
pub fn basin_survey(
    system: &ProductSystem,
    sampler: &Sampler,
    n_samples: u64,
    max_iter: u64,
    radius: f64,
) -> Result<BasinReport, StatsError> {
    let h = system.center().ok_or(StatsError::NeedsCenter)?;
    if n_samples == 0 {
        return Err(StatsError::EmptySample);
    }
    let classes: Result<Vec<BasinClass>, StatsError> = (0..n_samples)
        .into_par_iter()
        .map(|i| classify_basin(system, &sampler.sample(system, i, n_samples), max_iter, radius))
        .collect();
    let classes = classes?;

    let sinks = h.sinks();
    let mut counts = vec![0u64; sinks.len()];
    let mut unresolved = 0u64;
    for class in classes {
        match class {
            BasinClass::Sink(i) => counts[i] += 1,
            BasinClass::Unresolved => unresolved += 1,
        }
    }
    let stats = sinks
        .iter()
        .enumerate()
        .map(|(i, sink)| {
            let fraction = counts[i] as f64 / n_samples as f64;
            SinkStat {
                sink_index: i,
                position: sink.position,
                count: counts[i],
                fraction,
                half_width_3sigma: 3.0 * (fraction * (1.0 - fraction) / n_samples as f64).sqrt(),
            }
        })
        .collect();
    Ok(BasinReport {
        sinks: stats,
        unresolved,
        total: n_samples,
    })
}
