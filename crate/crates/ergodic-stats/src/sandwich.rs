use serde::{Deserialize, Serialize};

use dynamics_core::{ProductSystem, SystemPoint};

use crate::basin::{circle_dist, classify_basin, BasinClass};
use crate::birkhoff::KahanComplex;
use crate::error::StatsError;
use crate::observable::Observable;

/// One rung of the comparison ladder: the Birkhoff-average gap `D(n)`
/// between the orbit of `p0` and the orbit of its projection to the sink
/// slice, against the uniform-continuity bound `eps + N_delta * P / n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderPoint {
    pub n: u64,
    pub deviation: f64,
    pub bound: f64,
    pub passed: bool,
}

/// Result of the two-orbit sandwich comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    /// Sink the start point resolves to.
    pub sink_index: usize,
    pub sink_position: f64,
    /// Continuity scale `delta = eps / L` for the observable's Lipschitz
    /// constant L (infinite for constants).
    pub delta: f64,
    /// Whether `delta` came from a sampled Lipschitz estimate rather than a
    /// closed form.
    pub lipschitz_estimated: bool,
    /// First step at which the two orbits are `delta`-close; they stay so
    /// afterwards because the center contraction is monotone.
    pub n_delta: u64,
    /// Sup-norm bound `P` of the observable.
    pub sup_norm: f64,
    pub ladder: Vec<LadderPoint>,
    pub passed: bool,
}

/// Compare the Birkhoff averages of `obs` along the orbit of `p0` and along
/// the orbit of `p0` with its center coordinate replaced by the sink it
/// resolves to. Only the center coordinates differ, so the orbit distance is
/// the circle distance of the center coordinates, and the classical
/// uniform-continuity sandwich gives
/// `D(n) <= eps + N_delta * P / n` at every rung.
pub fn sandwich_check(
    system: &ProductSystem,
    obs: &Observable,
    p0: &SystemPoint,
    eps: f64,
    n_max: u64,
    max_iter: u64,
    radius: f64,
) -> Result<SandwichReport, StatsError> {
    if !(eps > 0.0) {
        return Err(StatsError::BadTolerance { eps });
    }
    if n_max == 0 {
        return Err(StatsError::EmptySample);
    }
    let h = system.center().ok_or(StatsError::NeedsCenter)?;
    let sink_index = match classify_basin(system, p0, max_iter, radius)? {
        BasinClass::Sink(i) => i,
        BasinClass::Unresolved => return Err(StatsError::UnresolvedStart),
    };
    let sink_position = h.sinks()[sink_index].position;
    let mut shadow = p0.clone();
    shadow.z = Some(sink_position);

    obs.evaluate(p0)?;
    let lipschitz = obs.lipschitz();
    let delta = if lipschitz.value == 0.0 {
        f64::INFINITY
    } else {
        eps / lipschitz.value
    };

    // First pass: center coordinates only, to measure N_delta.
    let mut n_delta = 0u64;
    {
        let mut z = p0.z.expect("classified point has a center coordinate");
        let mut z_shadow = sink_position;
        let mut step = 0u64;
        while circle_dist(z, z_shadow) >= delta {
            z = h.apply(z);
            z_shadow = h.apply(z_shadow);
            step += 1;
            if step > n_max {
                break;
            }
        }
        n_delta = n_delta.max(step);
    }

    // Second pass: both full orbits in lockstep, recording the average gap
    // at each ladder rung.
    let sup_norm = obs.sup_norm();
    let rungs = ladder(n_max);
    let mut ladder_points = Vec::with_capacity(rungs.len());
    let mut acc = KahanComplex::default();
    let mut acc_shadow = KahanComplex::default();
    let mut p = p0.clone();
    let mut q = shadow;
    let mut rung_iter = rungs.iter().copied().peekable();
    for step in 1..=n_max {
        acc.add(obs.evaluate(&p).expect("shape validated"));
        acc_shadow.add(obs.evaluate(&q).expect("shape validated"));
        if rung_iter.peek() == Some(&step) {
            rung_iter.next();
            let deviation = (acc.mean(step) - acc_shadow.mean(step)).norm();
            let bound = eps + n_delta as f64 * sup_norm / step as f64;
            ladder_points.push(LadderPoint {
                n: step,
                deviation,
                bound,
                passed: deviation <= bound,
            });
        }
        if step < n_max {
            system.step_in_place(&mut p);
            system.step_in_place(&mut q);
        }
    }

    let passed = ladder_points.iter().all(|l| l.passed);
    Ok(SandwichReport {
        sink_index,
        sink_position,
        delta,
        lipschitz_estimated: lipschitz.estimated,
        n_delta,
        sup_norm,
        ladder: ladder_points,
        passed,
    })
}

/// Decades `10^3, 10^4, ...` up to `n_max`, with `n_max` itself appended
/// when it is not a decade. Short runs get the single rung `n_max`.
fn ladder(n_max: u64) -> Vec<u64> {
    let mut rungs = Vec::new();
    let mut n = 1000u64;
    while n <= n_max {
        rungs.push(n);
        match n.checked_mul(10) {
            Some(next) => n = next,
            None => break,
        }
    }
    if rungs.last() != Some(&n_max) {
        rungs.push(n_max);
    }
    rungs
}
