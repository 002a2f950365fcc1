use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use dynamics_core::CatMap;

use crate::error::LatticeError;
use crate::index::index_step;

/// Escape record of one nonzero torus frequency: the number of transpose
/// steps after which the forward index orbit first leaves the box
/// `max(|m|, |n|) <= box_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeEntry {
    pub m: i64,
    pub n: i64,
    pub steps: u32,
}

/// Finite evidence that every nonzero frequency in a box escapes: one entry
/// per index in a fixed row-major order, plus the indices (if any) that
/// exhausted the step budget. A nonempty `failures` list means the evidence
/// is inconclusive, which for a genuinely hyperbolic matrix signals a bug or
/// an absurdly small budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeCertificate {
    pub box_bound: i64,
    pub step_budget: u32,
    pub entries: Vec<EscapeEntry>,
    pub failures: Vec<(i64, i64)>,
    /// Largest observed escape step over the whole box.
    pub max_steps: u32,
}

impl EscapeCertificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Number of certified indices; completeness demands `(2M+1)^2 - 1`.
    pub fn index_count(&self) -> usize {
        self.entries.len()
    }
}

/// Iterate every nonzero `(m, n)` with `max(|m|, |n|) <= box_bound` under
/// the transpose index map until it leaves the box, recording step counts.
/// Forward orbits suffice: no nonzero integer vector lies on the stable
/// eigendirection (its slope is irrational), so every index eventually
/// enters the expanding cone and escapes.
pub fn escape_certificate(
    cat: &CatMap,
    box_bound: i64,
    step_budget: u32,
) -> Result<EscapeCertificate, LatticeError> {
    if box_bound < 1 || step_budget < 1 {
        return Err(LatticeError::EmptyBox);
    }

    let rows: Result<Vec<_>, LatticeError> = (-box_bound..=box_bound)
        .into_par_iter()
        .map(|m| {
            let mut entries = Vec::with_capacity(2 * box_bound as usize + 1);
            let mut failures = Vec::new();
            for n in -box_bound..=box_bound {
                if m == 0 && n == 0 {
                    continue;
                }
                match escape_steps(cat, m, n, box_bound, step_budget)? {
                    Some(steps) => entries.push(EscapeEntry { m, n, steps }),
                    None => failures.push((m, n)),
                }
            }
            Ok((entries, failures))
        })
        .collect();

    let rows = rows?;
    let mut entries = Vec::with_capacity((2 * box_bound as usize + 1).pow(2) - 1);
    let mut failures = Vec::new();
    for (row_entries, row_failures) in rows {
        entries.extend(row_entries);
        failures.extend(row_failures);
    }
    let max_steps = entries.iter().map(|e| e.steps).max().unwrap_or(0);
    Ok(EscapeCertificate {
        box_bound,
        step_budget,
        entries,
        failures,
        max_steps,
    })
}

fn escape_steps(
    cat: &CatMap,
    mut m: i64,
    mut n: i64,
    box_bound: i64,
    step_budget: u32,
) -> Result<Option<u32>, LatticeError> {
    for step in 1..=step_budget {
        (m, n) = index_step(m, n, cat)?;
        if m.abs().max(n.abs()) > box_bound {
            return Ok(Some(step));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bad_parameters_rejected() {
        let cat = CatMap::default();
        assert_eq!(escape_certificate(&cat, 0, 8), Err(LatticeError::EmptyBox));
        assert_eq!(escape_certificate(&cat, 5, 0), Err(LatticeError::EmptyBox));
    }

    #[test]
    fn certificate_enumerates_the_whole_punctured_box() {
        let cat = CatMap::default();
        for m in [1i64, 3, 10] {
            let cert = escape_certificate(&cat, m, 64).unwrap();
            let expected = (2 * m as usize + 1).pow(2) - 1;
            assert_eq!(cert.index_count(), expected);
            assert!(cert.passed());
        }
    }

    #[test]
    fn unit_frequency_escapes_box_ten_at_step_three() {
        // (1,0) -> (2,1) -> (5,3) -> (13,8): first exit of the box of side
        // 10 is at step 3.
        let cert = escape_certificate(&CatMap::default(), 10, 64).unwrap();
        let entry = cert
            .entries
            .iter()
            .find(|e| (e.m, e.n) == (1, 0))
            .unwrap();
        assert_eq!(entry.steps, 3);
    }

    #[test]
    fn transient_index_escapes_box_one_at_step_two() {
        // (1,-1) -> (1,0) -> (2,1): exits max-norm box 1 at step 2.
        let cert = escape_certificate(&CatMap::default(), 1, 64).unwrap();
        let entry = cert
            .entries
            .iter()
            .find(|e| (e.m, e.n) == (1, -1))
            .unwrap();
        assert_eq!(entry.steps, 2);
    }

    #[test]
    fn every_recorded_step_matches_direct_iteration() {
        // Brute-force oracle re-run inline over the full box.
        let cat = CatMap::default();
        let bound = 20i64;
        let cert = escape_certificate(&cat, bound, 64).unwrap();
        for entry in &cert.entries {
            let (mut m, mut n) = (entry.m, entry.n);
            let mut steps = 0u32;
            while m.abs().max(n.abs()) <= bound {
                let (a, b, c, d) = cat.entries();
                let (nm, nn) = (a * m + c * n, b * m + d * n);
                m = nm;
                n = nn;
                steps += 1;
            }
            assert_eq!(steps, entry.steps, "at ({}, {})", entry.m, entry.n);
        }
    }

    #[test]
    fn norm_grows_strictly_after_escape() {
        let cat = CatMap::default();
        let bound = 20i64;
        let cert = escape_certificate(&cat, bound, 64).unwrap();
        for entry in &cert.entries {
            let (mut m, mut n) = (entry.m, entry.n);
            for _ in 0..entry.steps {
                (m, n) = index_step(m, n, &cat).unwrap();
            }
            let mut norm = m.abs().max(n.abs());
            assert!(norm > bound);
            for _ in 0..5 {
                (m, n) = index_step(m, n, &cat).unwrap();
                let next = m.abs().max(n.abs());
                assert!(next > norm, "norm stalled at ({m}, {n})");
                norm = next;
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_a_failure_not_a_panic() {
        // One step cannot clear the box from deep inside it.
        let cert = escape_certificate(&CatMap::default(), 50, 1).unwrap();
        assert!(!cert.passed());
        assert!(cert.failures.contains(&(1, -1)));
    }
}
