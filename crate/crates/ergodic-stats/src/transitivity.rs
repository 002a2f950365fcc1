use serde::{Deserialize, Serialize};

use dynamics_core::{ProductSystem, SystemPoint};

use crate::error::StatsError;

/// Refuse to allocate more than this many visit flags.
const BOX_CAP: u128 = 1 << 28;

/// Coverage of an `eps`-box partition by one orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitivityReport {
    pub boxes_per_axis: usize,
    pub dimensions: usize,
    pub total_boxes: u64,
    pub visited: u64,
    pub fraction: f64,
}

/// Partition T^2 x (S^1)^r into `ceil(1/eps)` boxes per axis and report the
/// fraction visited by the length-`samples` orbit of `p0`. A topologically
/// transitive map takes a generic orbit through every box once `samples` is
/// past the coupon-collector scale; an orbit trapped in finitely many
/// rotation fibers plateaus strictly below 1.
pub fn transitivity_probe(
    system: &ProductSystem,
    p0: &SystemPoint,
    eps: f64,
    samples: u64,
) -> Result<TransitivityReport, StatsError> {
    if system.has_center() {
        return Err(StatsError::CenterNotSupported);
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(StatsError::BadBoxResolution { eps });
    }
    if samples == 0 {
        return Err(StatsError::EmptySample);
    }
    let per_axis = (1.0 / eps).ceil() as usize;
    let dimensions = 2 + system.rotation_count();
    let total = (per_axis as u128).pow(dimensions as u32);
    if total > BOX_CAP {
        return Err(StatsError::TooManyBoxes {
            boxes: total,
            cap: BOX_CAP,
        });
    }
    let total = total as usize;

    let mut visited = vec![false; total];
    let mut visited_count = 0u64;
    system.visit_orbit(p0, samples, |p| {
        let mut cell = p.x.bin(per_axis);
        cell = cell * per_axis + p.y.bin(per_axis);
        for w in &p.w {
            cell = cell * per_axis + w.bin(per_axis);
        }
        if !visited[cell] {
            visited[cell] = true;
            visited_count += 1;
        }
    })?;

    Ok(TransitivityReport {
        boxes_per_axis: per_axis,
        dimensions,
        total_boxes: total as u64,
        visited: visited_count,
        fraction: visited_count as f64 / total as f64,
    })
}
