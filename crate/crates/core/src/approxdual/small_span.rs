use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::pair::DualPair;
use crate::error::{Error, Result};
use crate::f2core::{parity, CharacterTable, F2Set};
use crate::rational::{ratio, serde_str};
use crate::{Limits, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallSpanDual {
    pub pair: DualPair,
    pub span_size: u128,
    /// Number of classes `B` splits into.
    pub classes: usize,
    /// `(eps/2) |B| / |span A|`, the size `|B'|` is checked against.
    #[serde(with = "serde_str")]
    pub b_floor: Rational,
    /// `eps^2 (|A| / |span A|) |B|`, recorded for comparison only.
    #[serde(with = "serde_str")]
    pub lemma_bound: Rational,
    /// `(eps^2 / 4)(|A| / |span A|) |B|`, recorded for comparison only.
    #[serde(with = "serde_str")]
    pub lemma_bound_general: Rational,
}

/// For `A ⊆ Spec_eps(B)` with small span: split `B` by the inner products
/// with a basis of `span A`. Inside one class every `a in A` has a fixed
/// product with all of the class; take the class and majority side of `A`
/// with the largest area.
pub fn small_span_dual(
    a: &F2Set,
    b: &F2Set,
    eps: &Rational,
    limits: &Limits,
) -> Result<SmallSpanDual> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if *eps <= Rational::zero() {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let table = CharacterTable::new(b, limits.dense_cap);
    if let Some(&x) = a.words().iter().find(|&&x| !table.in_spectrum(x, eps)) {
        return Err(Error::Precondition(format!(
            "element {x:#x} lies outside Spec_eps(B)"
        )));
    }
    let basis = a.basis();
    let mut classes: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &y in b.words() {
        let pattern = basis
            .rows()
            .iter()
            .enumerate()
            .fold(0u64, |p, (t, &r)| p | ((parity(r & y) as u64) << t));
        classes.entry(pattern).or_default().push(y);
    }

    let mut best: Option<(usize, Vec<u64>, Vec<u64>)> = None;
    for members in classes.values() {
        let y = members[0];
        let (zeros, ones): (Vec<u64>, Vec<u64>) =
            a.words().iter().partition(|&&x| parity(x & y) == 0);
        let side = if ones.len() > zeros.len() {
            ones
        } else {
            zeros
        };
        let area = side.len() * members.len();
        let better = match &best {
            None => true,
            Some((ba, _, bb)) => area > *ba || (area == *ba && members[0] < bb[0]),
        };
        if better {
            best = Some((area, side, members.clone()));
        }
    }
    let (_, side, members) = best.expect("B is nonempty");
    let n = a.dim();
    let pair = DualPair::new(F2Set::from_words(n, side)?, F2Set::from_words(n, members)?)?;

    let span_size = a.span_size();
    let b_floor = eps * ratio(b.len() as u64, 2u64) / Rational::from_integer(span_size.into());
    if 2 * pair.a.len() < a.len() || ratio(pair.b.len() as u64, 1) < b_floor {
        return Err(Error::InvariantViolation(format!(
            "small-span pair {}x{} below floors (|A| = {}, |B'| floor {b_floor})",
            pair.a.len(),
            pair.b.len(),
            a.len()
        )));
    }
    let lemma_bound = eps * eps * ratio(a.len() as u64 * b.len() as u64, 1)
        / Rational::from_integer(span_size.into());
    let lemma_bound_general = &lemma_bound / ratio(4, 1);
    Ok(SmallSpanDual {
        pair,
        span_size,
        classes: classes.len(),
        b_floor,
        lemma_bound,
        lemma_bound_general,
    })
}
