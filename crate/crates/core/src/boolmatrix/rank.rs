use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::BoolMatrix;

/// Rank over `F_2` by elimination on packed row words.
pub fn rank_f2(m: &BoolMatrix) -> usize {
    let stride = m.stride();
    let mut rows: Vec<Vec<u64>> = (0..m.rows()).map(|i| m.row_words(i).to_vec()).collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[w] & bit != 0 {
                for k in w..stride {
                    row[k] ^= pivot[k];
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

trait Ring: Clone + Zero + One + PartialEq {
    fn mul_sub_div(a: &Self, b: &Self, c: &Self, d: &Self, prev: &Self) -> Option<Self>;
}

impl Ring for i128 {
    fn mul_sub_div(a: &i128, b: &i128, c: &i128, d: &i128, prev: &i128) -> Option<i128> {
        let x = a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)?;
        Some(x / prev)
    }
}

impl Ring for BigInt {
    fn mul_sub_div(
        a: &BigInt,
        b: &BigInt,
        c: &BigInt,
        d: &BigInt,
        prev: &BigInt,
    ) -> Option<BigInt> {
        Some((a * b - c * d) / prev)
    }
}

/// Fraction-free (Bareiss) row echelon elimination; `None` on overflow.
fn bareiss_rank<T: Ring>(mut a: Vec<Vec<T>>, cols: usize) -> Option<usize> {
    let rows = a.len();
    let mut prev = T::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            for j in col + 1..cols {
                row[j] = T::mul_sub_div(&pivot_row[col], &row[j], &row[col], &pivot_row[j], &prev)?;
            }
            row[col] = T::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    Some(rank)
}

/// Exact rank over the rationals. Runs in `i128` and redoes the
/// elimination with big integers if an intermediate minor overflows.
pub fn rank_real(m: &BoolMatrix) -> usize {
    let small: Vec<Vec<i128>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.entry(i, j) as i128).collect())
        .collect();
    if let Some(r) = bareiss_rank(small, m.cols()) {
        return r;
    }
    let big: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| BigInt::from(m.entry(i, j))).collect())
        .collect();
    bareiss_rank(big, m.cols()).expect("big integers cannot overflow")
}
