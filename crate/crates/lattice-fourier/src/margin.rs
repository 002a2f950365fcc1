use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use dynamics_core::{AngleSpec, TorusCoord};

use crate::error::LatticeError;

/// `<alpha, k> mod 1`, computed exactly on the fixed-point grid from the
/// rounded angles.
pub fn frequency_dot(angles: &[AngleSpec], k: &[i64]) -> TorusCoord {
    debug_assert_eq!(angles.len(), k.len());
    angles
        .iter()
        .zip(k)
        .fold(TorusCoord::ZERO, |acc, (alpha, &ki)| {
            acc + alpha.coord().scale(ki)
        })
}

/// Distance of `e^{2 pi i <alpha, k>}` from 1, i.e. `2 |sin(pi <alpha, k>)|`.
/// A strictly positive margin is the numeric form of the statement that the
/// pure rotation frequency `k` admits no invariant Fourier coefficient. The
/// value is computed for the rounded angles: the dot product is exact and
/// only the final sine rounds, so rational angles on the grid report a
/// margin of exactly zero.
pub fn rotation_margin(angles: &[AngleSpec], k: &[i64]) -> Result<f64, LatticeError> {
    if k.len() != angles.len() {
        return Err(LatticeError::FrequencyArityMismatch {
            frequency: k.len(),
            rotations: angles.len(),
        });
    }
    if k.iter().all(|&ki| ki == 0) {
        return Err(LatticeError::ZeroFrequency);
    }
    let dot = frequency_dot(angles, k);
    // |sin(pi t)| = sin(pi * dist(t, Z)); the distance is exact on raws.
    Ok(2.0 * (PI * dot.dist_to_zero()).sin())
}

/// A small integer relation `sum_i coeffs[i] * alpha_i = constant (+- residual)`
/// found by the falsifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalRelation {
    pub coeffs: Vec<i64>,
    pub constant: i64,
    pub residual: f64,
}

/// Exhaustively search integer vectors `(C_1..C_r, C_0)` with all
/// coefficients bounded by `coeff_bound` for `|sum C_i alpha_i - C_0| < tol`,
/// scanning shells of increasing max-norm so small relations surface first.
/// Returns the first hit. This can only *falsify* rational independence of
/// the rounded angles; finding nothing proves nothing. It is a sanity
/// screen, not an integer-relation algorithm.
pub fn independence_falsifier(
    angles: &[AngleSpec],
    coeff_bound: i64,
    tol: f64,
) -> Result<Option<RationalRelation>, LatticeError> {
    if coeff_bound < 1 {
        return Err(LatticeError::EmptyCoefficientBox);
    }
    let r = angles.len();
    let mut coeffs = vec![0i64; r];
    for shell in 1..=coeff_bound {
        if let Some(relation) = scan_shell(angles, &mut coeffs, 0, shell, false, tol, coeff_bound) {
            return Ok(Some(relation));
        }
    }
    Ok(None)
}

/// Depth-first enumeration of coefficient vectors with max-norm exactly
/// `shell` (tracked by `saturated`), in lexicographic order within the shell.
fn scan_shell(
    angles: &[AngleSpec],
    coeffs: &mut Vec<i64>,
    depth: usize,
    shell: i64,
    saturated: bool,
    tol: f64,
    coeff_bound: i64,
) -> Option<RationalRelation> {
    if depth == coeffs.len() {
        if !saturated {
            return None;
        }
        return check_relation(angles, coeffs, tol, coeff_bound);
    }
    for c in -shell..=shell {
        coeffs[depth] = c;
        let hit = scan_shell(
            angles,
            coeffs,
            depth + 1,
            shell,
            saturated || c.abs() == shell,
            tol,
            coeff_bound,
        );
        if hit.is_some() {
            return hit;
        }
    }
    None
}

fn check_relation(
    angles: &[AngleSpec],
    coeffs: &[i64],
    tol: f64,
    coeff_bound: i64,
) -> Option<RationalRelation> {
    let dot = frequency_dot(angles, coeffs);
    let residual = dot.dist_to_zero();
    if residual >= tol {
        return None;
    }
    // Recover the integer part from a float dot product; magnitudes here are
    // tiny (|sum| <= r * bound), so this is exact to ~1e-13.
    let sum: f64 = angles
        .iter()
        .zip(coeffs)
        .map(|(alpha, &c)| alpha.value() * c as f64)
        .sum();
    let constant = sum.round() as i64;
    if constant.abs() > coeff_bound {
        return None;
    }
    Some(RationalRelation {
        coeffs: coeffs.to_vec(),
        constant,
        residual,
    })
}
