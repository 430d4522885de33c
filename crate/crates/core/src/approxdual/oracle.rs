use super::pair::DualPair;
use crate::boolmatrix::{greedy_mono, BoolMatrix};
use crate::error::{Error, Result};
use crate::f2core::{parity, F2Set};

fn check_inputs(a: &F2Set, b: &F2Set) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(())
}

/// Largest side the closed-set enumeration handles (one `u64` mask).
pub const ORACLE_HARD_CAP: usize = 64;

/// Close-by-One over closed subsets `X` of the small side for one bit `v`:
/// `Y = X'` is every element of the other side with `<x, y> = v` on all of
/// `X`, and `X = Y'` in turn. Every maximum-area pair is closed.
struct Closed<'a> {
    /// For each small-side element, mask over the other side where the product is `v`.
    rel: Vec<Vec<u64>>,
    /// For each other-side element, mask over the small side where the product is `v`.
    rel_t: Vec<u64>,
    small: &'a [u64],
    other: &'a [u64],
    small_is_a: bool,
    dim: usize,
    v: u8,
    best: Option<DualPair>,
}

fn popcount(m: &[u64]) -> usize {
    m.iter().map(|w| w.count_ones() as usize).sum()
}

impl Closed<'_> {
    /// Small-side elements related to everything in `y`.
    fn extent(&self, y: &[u64]) -> u64 {
        let mut x = if self.small.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.small.len()) - 1
        };
        for (w, &word) in y.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let j = w * 64 + bits.trailing_zeros() as usize;
                x &= self.rel_t[j];
                bits &= bits - 1;
            }
        }
        x
    }

    fn record(&mut self, x: u64, y: &[u64]) {
        let (nx, ny) = (x.count_ones() as usize, popcount(y));
        if nx == 0 || ny == 0 {
            return;
        }
        if self.best.as_ref().is_some_and(|b| nx * ny < b.area()) {
            return;
        }
        let xs = F2Set::from_sorted_unchecked(
            self.dim,
            (0..self.small.len())
                .filter(|&i| x >> i & 1 == 1)
                .map(|i| self.small[i])
                .collect(),
        );
        let ys = F2Set::from_sorted_unchecked(
            self.dim,
            (0..self.other.len())
                .filter(|&j| y[j / 64] >> (j % 64) & 1 == 1)
                .map(|j| self.other[j])
                .collect(),
        );
        let (a, b) = if self.small_is_a { (xs, ys) } else { (ys, xs) };
        let cand = DualPair {
            a,
            b,
            constant_bit: self.v,
        };
        if self.best.as_ref().is_none_or(|b| cand.better_than(b)) {
            self.best = Some(cand);
        }
    }

    fn generate(&mut self, x: u64, y: Vec<u64>, start: usize) {
        self.record(x, &y);
        let s = self.small.len();
        for j in start..s {
            if x >> j & 1 == 1 {
                continue;
            }
            let y2: Vec<u64> = y.iter().zip(&self.rel[j]).map(|(a, b)| a & b).collect();
            let ny = popcount(&y2);
            if ny == 0 || self.best.as_ref().is_some_and(|b| ny * s < b.area()) {
                continue;
            }
            let x2 = self.extent(&y2);
            let below = (1u64 << j) - 1;
            if x2 & below != x & below {
                continue;
            }
            self.generate(x2, y2, j + 1);
        }
    }
}

/// Maximum-area dual pair. Enumerates the closed subsets of the smaller
/// side for each constant bit; the other side is forced. Ties go to the
/// canonically smaller `A'`, then `B'`, then bit 0.
pub fn exact_dual_oracle(a: &F2Set, b: &F2Set, exact_cap: usize) -> Result<DualPair> {
    check_inputs(a, b)?;
    let small_is_a = a.len() <= b.len();
    let (small, other) = if small_is_a { (a, b) } else { (b, a) };
    let cap = exact_cap.min(ORACLE_HARD_CAP);
    if small.len() > cap {
        return Err(Error::CapExceeded {
            what: "exact dual oracle side",
            value: small.len(),
            cap,
        });
    }
    let words = other.len().div_ceil(64);
    let mut full = vec![u64::MAX; words];
    if other.len() % 64 != 0 {
        full[words - 1] = (1u64 << (other.len() % 64)) - 1;
    }
    let mut best: Option<DualPair> = None;
    for v in 0..2u8 {
        let rel: Vec<Vec<u64>> = small
            .words()
            .iter()
            .map(|&x| {
                let mut mask = vec![0u64; words];
                for (j, &y) in other.words().iter().enumerate() {
                    if parity(x & y) == v {
                        mask[j / 64] |= 1 << (j % 64);
                    }
                }
                mask
            })
            .collect();
        let rel_t: Vec<u64> = other
            .words()
            .iter()
            .map(|&y| {
                small
                    .words()
                    .iter()
                    .enumerate()
                    .filter(|&(_, &x)| parity(x & y) == v)
                    .fold(0u64, |m, (i, _)| m | 1 << i)
            })
            .collect();
        let mut search = Closed {
            rel,
            rel_t,
            small: small.words(),
            other: other.words(),
            small_is_a,
            dim: a.dim(),
            v,
            best: best.take(),
        };
        let x0 = search.extent(&full);
        search.generate(x0, full.clone(), 0);
        best = search.best;
    }
    let best = best.expect("a single pair is always dual");
    DualPair::new(best.a, best.b)
}

/// Greedy dual pair via the inner-product matrix of `A x B`.
pub fn greedy_dual(a: &F2Set, b: &F2Set) -> Result<DualPair> {
    check_inputs(a, b)?;
    let (aw, bw) = (a.words(), b.words());
    let m = BoolMatrix::from_fn(aw.len(), bw.len(), |i, j| parity(aw[i] & bw[j]) == 1)?;
    let rect = greedy_mono(&m);
    let n = a.dim();
    DualPair::new(
        F2Set::from_sorted_unchecked(n, rect.view.rows.iter().map(|&i| aw[i]).collect()),
        F2Set::from_sorted_unchecked(n, rect.view.cols.iter().map(|&j| bw[j]).collect()),
    )
}
