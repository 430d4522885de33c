use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2core::{Basis, F2Set};
use crate::rational::{ratio, serde_str};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PfrStrategy {
    Exact,
    Greedy,
    /// Exact when `|A| <= exact_cap`, greedy otherwise.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PfrResult {
    pub subset: F2Set,
    /// `|span A'|`.
    pub span_size: u128,
    /// `|A'| / |A|`.
    #[serde(with = "serde_str")]
    pub ratio: Rational,
    pub strategy: PfrStrategy,
    /// `|A| = 1`: the `|span A'| <= |A|` requirement is not applied.
    pub singleton_waiver: bool,
    /// `K = |A + A| / |A|` of the input.
    #[serde(with = "serde_str")]
    pub doubling: Rational,
    /// `log2(K^{-r} |A|)` with `r = pfr_exponent`, for comparison only.
    pub log2_predicted_floor: f64,
    pub pfr_exponent: u32,
}

/// The PFR exponent is not known; reports use this placeholder value.
pub const DEFAULT_PFR_EXPONENT: u32 = 1;

fn closure(a: &F2Set, basis: &Basis) -> F2Set {
    a.filter(|w| basis.contains(w))
}

/// Largest subsets of the form `A ∩ W`, `W` spanned by elements of `A`
/// with `|W| <= |A|`, by enumerating independent generator sequences in
/// increasing index order.
fn exact(a: &F2Set) -> F2Set {
    let words = a.words();
    let max_dim = (usize::BITS - 1 - a.len().leading_zeros()) as usize;
    let mut best = closure(a, &Basis::new());
    let mut stack: Vec<(usize, Basis)> = vec![(0, Basis::new())];
    while let Some((start, basis)) = stack.pop() {
        if basis.rank() == max_dim {
            continue;
        }
        for idx in start..words.len() {
            let mut next = basis.clone();
            if !next.insert(words[idx]) {
                continue;
            }
            let cand = closure(a, &next);
            if cand.len() > best.len() || (cand.len() == best.len() && cand.words() < best.words())
            {
                best = cand;
            }
            stack.push((idx + 1, next));
        }
    }
    best
}

/// Grows a span one generator at a time, each step taking the coset
/// `x + W` holding the most elements of `A`, while `|W| <= |A|`.
fn greedy(a: &F2Set) -> F2Set {
    let mut basis = Basis::new();
    loop {
        if (1u128 << (basis.rank() + 1)) > a.len() as u128 {
            break;
        }
        let mut classes: HashMap<u64, (usize, u64)> = HashMap::new();
        for &w in a.words() {
            let rep = basis.reduce(w);
            if rep == 0 {
                continue;
            }
            let e = classes.entry(rep).or_insert((0, w));
            e.0 += 1;
            e.1 = e.1.min(w);
        }
        let Some((_, &(_, x))) = classes
            .iter()
            .max_by(|p, q| p.1 .0.cmp(&q.1 .0).then(q.1 .1.cmp(&p.1 .1)))
        else {
            break;
        };
        basis.insert(x);
    }
    closure(a, &basis)
}

/// Subset `A'` of `A` with `|span A'| <= |A|`, as large as the strategy finds.
pub fn pfr_extract(a: &F2Set, strategy: PfrStrategy, exact_cap: usize) -> Result<PfrResult> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let used = match strategy {
        PfrStrategy::Auto if a.len() <= exact_cap => PfrStrategy::Exact,
        PfrStrategy::Auto => PfrStrategy::Greedy,
        PfrStrategy::Exact if a.len() > exact_cap => {
            return Err(Error::CapExceeded {
                what: "set size for exact PFR search",
                value: a.len(),
                cap: exact_cap,
            })
        }
        s => s,
    };
    let singleton = a.len() == 1;
    let mut subset = if singleton {
        a.clone()
    } else if used == PfrStrategy::Exact {
        exact(a)
    } else {
        greedy(a)
    };
    if subset.is_empty() {
        // Only reachable when 0 is not in A and no generator fits, which
        // cannot happen for |A| >= 2; keep the smallest element.
        subset = F2Set::from_words(a.dim(), [a.words()[0]])?;
    }
    let span_size = subset.span_size();
    if !singleton && span_size > a.len() as u128 {
        return Err(Error::InvariantViolation(format!(
            "PFR output span {span_size} exceeds |A| = {}",
            a.len()
        )));
    }
    let doubling = ratio(a.sumset(a)?.len() as u64, a.len() as u64);
    let k = crate::rational::to_f64(&doubling);
    let pfr_exponent = DEFAULT_PFR_EXPONENT;
    Ok(PfrResult {
        ratio: ratio(subset.len() as u64, a.len() as u64),
        span_size,
        strategy: used,
        singleton_waiver: singleton,
        log2_predicted_floor: (a.len() as f64).log2() - pfr_exponent as f64 * k.log2(),
        pfr_exponent,
        doubling,
        subset,
    })
}
