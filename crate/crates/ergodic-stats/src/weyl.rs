use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use dynamics_core::{AngleSpec, ProductSystem, SystemPoint};
use lattice_fourier::FrequencyIndex;

use crate::birkhoff::KahanComplex;
use crate::error::StatsError;
use crate::observable::Observable;

/// Max-frequency bounds per coordinate group: `|m| <= m_max`, `|n| <= n_max`,
/// `|k_i| <= k_max` on every rotation factor, and `|j| <= j_max` on the
/// center factor when requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyBox {
    pub m_max: i64,
    pub n_max: i64,
    pub k_max: i64,
    pub j_max: Option<i64>,
}

impl FrequencyBox {
    pub fn torus(m_max: i64, n_max: i64, k_max: i64) -> Self {
        FrequencyBox {
            m_max,
            n_max,
            k_max,
            j_max: None,
        }
    }
}

/// One Weyl sum: the modulus of the Birkhoff average of a character.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylRow {
    pub index: FrequencyIndex,
    pub samples: u64,
    pub modulus: f64,
}

/// All Weyl sums over a frequency box, one row per frequency in a fixed
/// lexicographic order; the zero frequency is included as a self-test row of
/// modulus exactly 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylSumTable {
    pub rows: Vec<WeylRow>,
}

impl WeylSumTable {
    /// Largest modulus over nonzero frequencies.
    pub fn max_nonzero_modulus(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| !r.index.is_zero())
            .map(|r| r.modulus)
            .fold(0.0, f64::max)
    }
}

/// Evaluate the Weyl sums of every character in the box along one orbit.
/// Rows are independent; they are computed in parallel but each row is a
/// serial compensated sum over its own orbit stream, so the table does not
/// depend on the worker count.
pub fn weyl_sums(
    system: &ProductSystem,
    p0: &SystemPoint,
    frequency_box: &FrequencyBox,
    samples: u64,
) -> Result<WeylSumTable, StatsError> {
    if samples == 0 {
        return Err(StatsError::EmptySample);
    }
    if frequency_box.m_max < 0
        || frequency_box.n_max < 0
        || frequency_box.k_max < 0
        || frequency_box.j_max.is_some_and(|j| j < 0)
    {
        return Err(StatsError::NegativeFrequencyBound);
    }
    if frequency_box.j_max.is_some() && !system.has_center() {
        return Err(StatsError::CenterFrequencyWithoutCenter);
    }
    system.validate_point(p0)?;

    let indices = enumerate_box(frequency_box, system.rotation_count(), system.has_center());
    let rows: Result<Vec<WeylRow>, StatsError> = indices
        .into_par_iter()
        .map(|index| {
            let obs = Observable::Character(index.clone());
            let mut acc = KahanComplex::default();
            system.visit_orbit(p0, samples, |p| {
                acc.add(obs.evaluate(p).expect("index shape matches the system"));
            })?;
            let modulus = acc.mean(samples).norm();
            debug_assert!(modulus <= 1.0 + 1e-9);
            Ok(WeylRow {
                index,
                samples,
                modulus,
            })
        })
        .collect();
    Ok(WeylSumTable { rows: rows? })
}

fn enumerate_box(b: &FrequencyBox, rotations: usize, with_center: bool) -> Vec<FrequencyIndex> {
    let mut out = Vec::new();
    let j_range: Vec<Option<i64>> = match b.j_max {
        Some(j_max) => (-j_max..=j_max).map(Some).collect(),
        None => vec![if with_center { Some(0) } else { None }],
    };
    let mut k = vec![0i64; rotations];
    for m in -b.m_max..=b.m_max {
        for n in -b.n_max..=b.n_max {
            odometer(&mut out, &mut k, 0, b.k_max, m, n, &j_range);
        }
    }
    return out;

    fn odometer(
        out: &mut Vec<FrequencyIndex>,
        k: &mut Vec<i64>,
        depth: usize,
        k_max: i64,
        m: i64,
        n: i64,
        j_range: &[Option<i64>],
    ) {
        if depth == k.len() {
            for &j in j_range {
                out.push(FrequencyIndex::new(m, n, k.clone(), j));
            }
            return;
        }
        for c in -k_max..=k_max {
            k[depth] = c;
            odometer(out, k, depth + 1, k_max, m, n, j_range);
        }
    }
}

/// Closed-form modulus of the pure rotation Weyl sum for the *rounded*
/// angle: `|sin(pi k N a)| / (N |sin(pi k a)|)`, with both arguments reduced
/// exactly on the fixed-point grid. Returns 1 when `k a` is an exact integer
/// (the degenerate geometric series).
pub fn rotation_weyl_modulus(alpha: &AngleSpec, k: i64, samples: u64) -> f64 {
    let raw = alpha.coord();
    let den_dist = raw.scale(k).dist_to_zero();
    if den_dist == 0.0 {
        return 1.0;
    }
    // k * N mod 2^64 is the exact multiplier for the numerator argument.
    let kn = (k as i128 * samples as i128) as u128 as u64;
    let num_dist = raw.scale_u64(kn).dist_to_zero();
    (PI * num_dist).sin() / (samples as f64 * (PI * den_dist).sin())
}
