use serde::{Deserialize, Serialize};

use dynamics_core::ProductSystem;

use crate::error::LatticeError;
use crate::escape::{escape_certificate, EscapeCertificate};
use crate::margin::rotation_margin;

/// Step budget for the escape check. Expansion by the unstable eigenvalue
/// clears any reasonable box long before this.
pub const DEFAULT_STEP_BUDGET: u32 = 64;

/// Floor below which a rotation margin counts as a failure. Rational angles
/// on the fixed-point grid produce margins below 1e-15, so any floor above
/// that catches them; genuinely Diophantine angles sit orders of magnitude
/// higher for small frequency boxes.
pub const DEFAULT_MARGIN_FLOOR: f64 = 1e-9;

/// One rotation-frequency margin row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginEntry {
    pub k: Vec<i64>,
    pub margin: f64,
}

/// Combined finite evidence for unique ergodicity of a product without a
/// center factor: every nonzero torus frequency escapes its box, and every
/// small nonzero rotation frequency has phase margin above the floor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErgodicityCertificate {
    pub escape: EscapeCertificate,
    pub k_bound: i64,
    pub margin_floor: f64,
    /// One entry per canonical nonzero `k` with max-norm at most `k_bound`
    /// (one representative per `{k, -k}` pair; margins are symmetric).
    pub margins: Vec<MarginEntry>,
    /// Margins at or below the floor, in scan order.
    pub margin_failures: Vec<MarginEntry>,
    pub min_margin: f64,
    pub min_margin_k: Vec<i64>,
    pub passed: bool,
}

impl ErgodicityCertificate {
    pub fn max_escape_steps(&self) -> u32 {
        self.escape.max_steps
    }
}

/// Run both halves of the lattice argument on a system without a center
/// factor. `box_bound` is the torus-frequency box, `k_bound` the rotation
/// frequency box.
pub fn ergodicity_certificate(
    system: &ProductSystem,
    box_bound: i64,
    k_bound: i64,
    margin_floor: f64,
    step_budget: u32,
) -> Result<ErgodicityCertificate, LatticeError> {
    if system.has_center() {
        return Err(LatticeError::CenterNotSupported);
    }
    if k_bound < 1 {
        return Err(LatticeError::EmptyBox);
    }
    let escape = escape_certificate(system.cat(), box_bound, step_budget)?;

    let angles = system.rotations();
    let mut margins = Vec::new();
    let mut margin_failures = Vec::new();
    let mut min_margin = f64::INFINITY;
    let mut min_margin_k = Vec::new();
    for k in canonical_frequencies(angles.len(), k_bound) {
        let margin = rotation_margin(angles, &k)?;
        if margin < min_margin {
            min_margin = margin;
            min_margin_k = k.clone();
        }
        let entry = MarginEntry { k, margin };
        if entry.margin <= margin_floor {
            margin_failures.push(entry.clone());
        }
        margins.push(entry);
    }

    let passed = escape.passed() && margin_failures.is_empty();
    Ok(ErgodicityCertificate {
        escape,
        k_bound,
        margin_floor,
        margins,
        margin_failures,
        min_margin,
        min_margin_k,
        passed,
    })
}

/// Nonzero integer vectors of max-norm 1..=bound, one per `{k, -k}` pair
/// (first nonzero component positive), enumerated shell by shell so the
/// smallest failing frequency is reported first.
fn canonical_frequencies(r: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut k = vec![0i64; r];
    for shell in 1..=bound {
        scan(&mut out, &mut k, 0, shell, false, false);
    }
    return out;

    fn scan(
        out: &mut Vec<Vec<i64>>,
        k: &mut Vec<i64>,
        depth: usize,
        shell: i64,
        saturated: bool,
        signed: bool,
    ) {
        if depth == k.len() {
            if saturated && signed {
                out.push(k.clone());
            }
            return;
        }
        // Leading entries stay nonnegative until the first strictly positive
        // one fixes the sign class.
        let lo = if signed { -shell } else { 0 };
        for c in lo..=shell {
            k[depth] = c;
            scan(
                out,
                k,
                depth + 1,
                shell,
                saturated || c.abs() == shell,
                signed || c > 0,
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dynamics_core::{AngleSpec, CatMap};

    #[test]
    fn canonical_frequency_counts() {
        // r=1: 1..=K. r=2: half of (2K+1)^2 - 1.
        assert_eq!(canonical_frequencies(1, 8).len(), 8);
        assert_eq!(canonical_frequencies(2, 3).len(), ((2 * 3 + 1) * (2 * 3 + 1) - 1) / 2);
        // Shell order puts small frequencies first.
        assert_eq!(canonical_frequencies(1, 3), vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn default_f_passes() {
        let f = ProductSystem::default_without_center();
        let cert =
            ergodicity_certificate(&f, 20, 5, DEFAULT_MARGIN_FLOOR, DEFAULT_STEP_BUDGET).unwrap();
        assert!(cert.passed);
        assert!(cert.min_margin > 0.5, "min margin {}", cert.min_margin);
        assert_eq!(cert.escape.index_count(), (2 * 20 + 1) * (2 * 20 + 1) - 1);
    }

    #[test]
    fn rational_third_fails_at_k_three() {
        let f = ProductSystem::without_center(
            CatMap::default(),
            vec![AngleSpec::explicit(1.0 / 3.0).unwrap()],
        )
        .unwrap();
        let cert =
            ergodicity_certificate(&f, 10, 5, DEFAULT_MARGIN_FLOOR, DEFAULT_STEP_BUDGET).unwrap();
        assert!(!cert.passed);
        assert_eq!(cert.margin_failures[0].k, vec![3]);
        assert_eq!(cert.min_margin_k, vec![3]);
        assert!(cert.min_margin < 1e-15);
    }

    #[test]
    fn center_factor_rejected() {
        let g = ProductSystem::default_with_center(1).unwrap();
        assert_eq!(
            ergodicity_certificate(&g, 10, 5, DEFAULT_MARGIN_FLOOR, DEFAULT_STEP_BUDGET),
            Err(LatticeError::CenterNotSupported)
        );
    }

    #[test]
    fn multi_rotation_certificate_covers_joint_frequencies() {
        let f = ProductSystem::without_center(
            CatMap::default(),
            vec![AngleSpec::golden(), AngleSpec::sqrt_prime(2).unwrap()],
        )
        .unwrap();
        let cert =
            ergodicity_certificate(&f, 10, 4, DEFAULT_MARGIN_FLOOR, DEFAULT_STEP_BUDGET).unwrap();
        assert!(cert.passed);
        assert_eq!(cert.margins.len(), ((2 * 4 + 1) * (2 * 4 + 1) - 1) / 2);
    }
}
