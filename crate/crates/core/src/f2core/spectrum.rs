use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::rational::serde_str;

use super::duality::{character_sum, sum_meets, CharacterTable};
use super::set::F2Set;
use crate::error::{Error, Result};
use crate::Rational;

/// `Spec_alpha(B)` together with every bias of `B`.
///
/// Biases are stored as integer character sums over the common
/// denominator `|B|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    #[serde(with = "serde_str")]
    pub threshold: Rational,
    pub denominator: u64,
    /// `sums[x] = sum_{b in B} (-1)^{<x,b>}` for every `x` in `F_2^n`.
    pub sums: Vec<i64>,
    pub members: F2Set,
}

impl SpectrumResult {
    pub fn bias(&self, x: u64) -> Rational {
        Rational::new(
            BigInt::from(self.sums[x as usize]),
            BigInt::from(self.denominator),
        )
    }
}

fn check(b: &F2Set, alpha: &Rational) -> Result<()> {
    if b.is_empty() {
        return Err(Error::EmptySet);
    }
    if *alpha < Rational::zero() || *alpha > Rational::one() {
        return Err(Error::ThresholdOutOfRange);
    }
    if b.dim() > 30 {
        return Err(Error::CapExceeded {
            what: "spectrum dimension",
            value: b.dim(),
            cap: 30,
        });
    }
    Ok(())
}

fn assemble(b: &F2Set, alpha: &Rational, sums: Vec<i64>) -> SpectrumResult {
    let members: Vec<u64> = sums
        .iter()
        .enumerate()
        .filter(|(_, &s)| sum_meets(s, b.len(), alpha))
        .map(|(x, _)| x as u64)
        .collect();
    SpectrumResult {
        threshold: alpha.clone(),
        denominator: b.len() as u64,
        sums,
        members: F2Set::from_sorted_unchecked(b.dim(), members),
    }
}

/// `Spec_alpha(B) = {x : |E_b (-1)^{<x,b>}| >= alpha}` over all of `F_2^n`.
///
/// Uses a Walsh–Hadamard transform of the indicator of `B` when
/// `n <= dense_cap`, otherwise sums characters directly.
pub fn spectrum(b: &F2Set, alpha: &Rational, dense_cap: usize) -> Result<SpectrumResult> {
    check(b, alpha)?;
    let table = CharacterTable::new(b, dense_cap);
    match table.dense_table() {
        Some(t) => Ok(assemble(b, alpha, t.to_vec())),
        None => spectrum_direct(b, alpha),
    }
}

/// Same result as [`spectrum`] computed by direct summation only.
pub fn spectrum_direct(b: &F2Set, alpha: &Rational) -> Result<SpectrumResult> {
    check(b, alpha)?;
    let sums = (0..1u64 << b.dim()).map(|x| character_sum(b, x)).collect();
    Ok(assemble(b, alpha, sums))
}
