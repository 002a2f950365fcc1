use serde::{Deserialize, Serialize};

use dynamics_core::{ProductSystem, SystemPoint};

use crate::birkhoff::KahanF64;
use crate::error::StatsError;

/// Lyapunov exponents of the product, block by block. The cocycle is
/// constant on the torus and rotation blocks, so those entries are analytic:
/// `+-log lambda_u` from the matrix and literal zeros for the rotations.
/// Only the center block is a genuine time average, of `log h'(z_j)` along
/// the orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    /// `[-log lambda_u, +log lambda_u]`.
    pub cat_exponents: [f64; 2],
    /// Exactly zero for every rotation factor.
    pub rotation_exponents: Vec<f64>,
    /// Time average of `log h'` along the orbit; `None` without a center.
    pub center_exponent: Option<f64>,
    pub samples: u64,
}

pub fn lyapunov_estimate(
    system: &ProductSystem,
    p0: &SystemPoint,
    samples: u64,
) -> Result<LyapunovEstimate, StatsError> {
    if samples == 0 {
        return Err(StatsError::EmptySample);
    }
    system.validate_point(p0)?;
    let log_lambda = system.cat().log_lambda_u();
    let center_exponent = match system.center() {
        None => None,
        Some(h) => {
            let mut acc = KahanF64::default();
            system.visit_orbit(p0, samples, |p| {
                let z = p.z.expect("validated center coordinate");
                acc.add(h.derivative(z).ln());
            })?;
            Some(acc.mean(samples))
        }
    };
    Ok(LyapunovEstimate {
        cat_exponents: [-log_lambda, log_lambda],
        rotation_exponents: vec![0.0; system.rotation_count()],
        center_exponent,
        samples,
    })
}
