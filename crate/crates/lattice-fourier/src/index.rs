use serde::{Deserialize, Serialize};

use dynamics_core::CatMap;

use crate::error::LatticeError;

/// A character frequency on T^2 x (S^1)^r (x S^1): torus frequencies
/// `(m, n)`, one integer per rotation factor in `k`, and an optional center
/// frequency `j`. The zero index is the constant character.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrequencyIndex {
    pub m: i64,
    pub n: i64,
    pub k: Vec<i64>,
    pub j: Option<i64>,
}

impl FrequencyIndex {
    pub fn new(m: i64, n: i64, k: Vec<i64>, j: Option<i64>) -> Self {
        FrequencyIndex { m, n, k, j }
    }

    /// The constant character on a system with `rotations` rotation factors.
    pub fn zero(rotations: usize, with_center: bool) -> Self {
        FrequencyIndex {
            m: 0,
            n: 0,
            k: vec![0; rotations],
            j: if with_center { Some(0) } else { None },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0
            && self.n == 0
            && self.k.iter().all(|&k| k == 0)
            && self.j.unwrap_or(0) == 0
    }

    /// l1 norm over all components; the Lipschitz constant of the character
    /// is `2 pi` times this.
    pub fn l1_norm(&self) -> f64 {
        let base = self.m.unsigned_abs() as f64 + self.n.unsigned_abs() as f64;
        let rot: f64 = self.k.iter().map(|k| k.unsigned_abs() as f64).sum();
        base + rot + self.j.map_or(0.0, |j| j.unsigned_abs() as f64)
    }
}

/// One step of the frequency dynamics on the torus components: the transpose
/// action `(m, n) -> (a m + c n, b m + d n)`. For the default matrix this is
/// the familiar `(m, n) -> (2m + n, m + n)`. Intermediate products are exact
/// in i128; results that leave the i64 range are reported as overflow.
pub fn index_step(m: i64, n: i64, cat: &CatMap) -> Result<(i64, i64), LatticeError> {
    let (a, b, c, d) = cat.entries();
    let nm = a as i128 * m as i128 + c as i128 * n as i128;
    let nn = b as i128 * m as i128 + d as i128 * n as i128;
    match (i64::try_from(nm), i64::try_from(nn)) {
        (Ok(nm), Ok(nn)) => Ok((nm, nn)),
        _ => Err(LatticeError::IndexOverflow { m: nm, n: nn }),
    }
}
