use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2core::{parity, F2Set};

/// Subsets `A'`, `B'` with `<a, b>_2` equal to `constant_bit` on all of
/// `A' x B'`, i.e. `D(A', B') = 1`. Checked exhaustively on construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualPair {
    pub a: F2Set,
    pub b: F2Set,
    pub constant_bit: u8,
}

impl DualPair {
    pub fn new(a: F2Set, b: F2Set) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch(a.dim(), b.dim()));
        }
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySet);
        }
        let bit = parity(a.words()[0] & b.words()[0]);
        let pair = DualPair {
            a,
            b,
            constant_bit: bit,
        };
        if !pair.is_dual() {
            return Err(Error::InvariantViolation(
                "dual pair has non-constant inner products".into(),
            ));
        }
        Ok(pair)
    }

    /// Exhaustive check of every inner product.
    pub fn is_dual(&self) -> bool {
        self.a.words().iter().all(|&x| {
            self.b
                .words()
                .iter()
                .all(|&y| parity(x & y) == self.constant_bit)
        })
    }

    pub fn area(&self) -> usize {
        self.a.len() * self.b.len()
    }

    /// Order used by the exact oracle: larger area, then canonical `A'`,
    /// then canonical `B'`, then bit 0.
    pub fn better_than(&self, other: &DualPair) -> bool {
        match self.area().cmp(&other.area()) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => {
                (self.a.words(), self.b.words(), self.constant_bit)
                    < (other.a.words(), other.b.words(), other.constant_bit)
            }
        }
    }
}
