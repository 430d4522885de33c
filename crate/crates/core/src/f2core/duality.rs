use num_bigint::BigInt;

use super::set::F2Set;
use super::vector::{parity, F2Vector};
use super::wht::wht;
use crate::error::{Error, Result};
use crate::Rational;

/// `sum_{b in B} (-1)^{<x,b>}`.
pub fn character_sum(b: &F2Set, x: u64) -> i64 {
    b.words()
        .iter()
        .map(|&w| if parity(x & w) == 0 { 1 } else { -1 })
        .sum()
}

/// Signed integer sum `sum_{a,b} (-1)^{<a,b>}` underlying `D(A, B)`.
pub fn duality_sum(a: &F2Set, b: &F2Set) -> Result<i64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(a.words().iter().map(|&x| character_sum(b, x)).sum())
}

/// `D(A, B) = |E_{a in A, b in B} (-1)^{<a,b>}|`, exactly.
pub fn duality_measure(a: &F2Set, b: &F2Set) -> Result<Rational> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let s = duality_sum(a, b)?;
    Ok(Rational::new(
        BigInt::from(s.abs()),
        BigInt::from(a.len() as u64) * BigInt::from(b.len() as u64),
    ))
}

/// Ordered pairs `(s, s')` in `S x S` with `s + s' = x`, including `s = s'`.
pub fn rep_count(s: &F2Set, x: &F2Vector) -> Result<usize> {
    if s.dim() != x.dim() {
        return Err(Error::DimensionMismatch(s.dim(), x.dim()));
    }
    let x = x.bits();
    Ok(s.words()
        .iter()
        .filter(|&&w| s.contains_word(w ^ x))
        .count())
}

/// Character sums of a fixed set `B`, dense when `2^n` fits under the cap.
#[derive(Debug, Clone)]
pub struct CharacterTable<'a> {
    set: &'a F2Set,
    dense: Option<Vec<i64>>,
}

impl<'a> CharacterTable<'a> {
    pub fn new(set: &'a F2Set, dense_cap: usize) -> Self {
        let dense = (set.dim() <= dense_cap).then(|| {
            let mut table = vec![0i64; 1 << set.dim()];
            for &w in set.words() {
                table[w as usize] = 1;
            }
            wht(&mut table).expect("power of two length");
            table
        });
        CharacterTable { set, dense }
    }

    pub fn set(&self) -> &F2Set {
        self.set
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    pub fn dense_table(&self) -> Option<&[i64]> {
        self.dense.as_deref()
    }

    pub fn sum(&self, x: u64) -> i64 {
        match &self.dense {
            Some(t) => t[x as usize],
            None => character_sum(self.set, x),
        }
    }

    pub fn bias(&self, x: u64) -> Rational {
        Rational::new(
            BigInt::from(self.sum(x)),
            BigInt::from(self.set.len() as u64),
        )
    }

    /// `|sum(x)| / |B| >= threshold`, compared exactly.
    pub fn in_spectrum(&self, x: u64, threshold: &Rational) -> bool {
        sum_meets(self.sum(x), self.set.len(), threshold)
    }
}

pub(crate) fn sum_meets(sum: i64, count: usize, threshold: &Rational) -> bool {
    let lhs = BigInt::from(sum.abs()) * threshold.denom();
    let rhs = threshold.numer() * BigInt::from(count as u64);
    lhs >= rhs
}

/// `E_{a,a' in A} |E_{b in B} (-1)^{<a+a',b>}|`, exactly.
pub fn pair_bias_mean(a: &F2Set, b: &F2Set, dense_cap: usize) -> Result<Rational> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let table = CharacterTable::new(b, dense_cap);
    let mut total: i128 = 0;
    for &x in a.words() {
        for &y in a.words() {
            total += table.sum(x ^ y).abs() as i128;
        }
    }
    let den = BigInt::from(a.len() as u64).pow(2) * BigInt::from(b.len() as u64);
    Ok(Rational::new(BigInt::from(total), den))
}
