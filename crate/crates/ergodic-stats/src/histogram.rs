use serde::{Deserialize, Serialize};

use dynamics_core::{ProductSystem, SystemPoint};

use crate::error::StatsError;

/// A multi-dimensional histogram over the equidistributing coordinates
/// `(x, y, w_1..w_r)` of an orbit. The center coordinate is deliberately
/// excluded: it converges to a sink instead of equidistributing. Bins
/// partition [0,1)^d exactly via fixed-point arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    pub dims: Vec<usize>,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl EmpiricalMeasure {
    /// An empty histogram with `dims[i]` bins on coordinate `i`; `dims` must
    /// cover x, y and every rotation coordinate.
    pub fn new(dims: Vec<usize>) -> Result<Self, StatsError> {
        if dims.len() < 2 {
            return Err(StatsError::DimsMismatch {
                dims: dims.len(),
                coords: 2,
            });
        }
        for &bins in &dims {
            if bins < 2 {
                return Err(StatsError::TooFewBins { bins });
            }
        }
        let cells: usize = dims.iter().product();
        Ok(EmpiricalMeasure {
            dims,
            counts: vec![0; cells],
            total: 0,
        })
    }

    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    /// Record one point; the point must have exactly `dims.len() - 2`
    /// rotation coordinates.
    pub fn record(&mut self, p: &SystemPoint) -> Result<(), StatsError> {
        if p.w.len() + 2 != self.dims.len() {
            return Err(StatsError::DimsMismatch {
                dims: self.dims.len(),
                coords: p.w.len() + 2,
            });
        }
        let mut cell = p.x.bin(self.dims[0]);
        cell = cell * self.dims[1] + p.y.bin(self.dims[1]);
        for (w, &bins) in p.w.iter().zip(&self.dims[2..]) {
            cell = cell * bins + w.bin(bins);
        }
        self.counts[cell] += 1;
        self.total += 1;
        Ok(())
    }

    /// Maximum over bins of `|count/N - uniform mass|`.
    pub fn uniformity_deviation(&self) -> f64 {
        let uniform = 1.0 / self.bin_count() as f64;
        let n = self.total as f64;
        self.counts
            .iter()
            .map(|&c| (c as f64 / n - uniform).abs())
            .fold(0.0, f64::max)
    }
}

/// Histogram of the first `samples` orbit points of `p0`.
pub fn empirical_measure(
    system: &ProductSystem,
    p0: &SystemPoint,
    dims: Vec<usize>,
    samples: u64,
) -> Result<EmpiricalMeasure, StatsError> {
    if samples == 0 {
        return Err(StatsError::EmptySample);
    }
    if dims.len() != 2 + system.rotation_count() {
        return Err(StatsError::DimsMismatch {
            dims: dims.len(),
            coords: 2 + system.rotation_count(),
        });
    }
    let mut hist = EmpiricalMeasure::new(dims)?;
    let mut shape_err = Ok(());
    system.visit_orbit(p0, samples, |p| {
        if shape_err.is_ok() {
            shape_err = hist.record(p);
        }
    })?;
    shape_err?;
    Ok(hist)
}
