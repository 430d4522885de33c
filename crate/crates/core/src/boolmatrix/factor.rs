use serde::{Deserialize, Serialize};

use super::matrix::BoolMatrix;
use crate::error::{Error, Result};
use crate::f2core::{parity, F2Set, MAX_DIM};

/// `M_{i,j} = <a_i, b_j>_2` with `a_i, b_j` in `F_2^r`, `r = rank_F2(M)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    /// `rank_F2(M)`; may be zero for an all-zero matrix.
    pub rank: usize,
    /// Ambient dimension of the vectors, `max(rank, 1)`.
    pub dim: usize,
    /// `a_i` for each row `i`.
    pub row_vectors: Vec<u64>,
    /// `b_j` for each column `j`.
    pub col_vectors: Vec<u64>,
    pub a: F2Set,
    pub b: F2Set,
}

impl Factorization {
    pub fn row_of(&self, w: u64) -> Option<usize> {
        self.row_vectors.iter().position(|&x| x == w)
    }

    pub fn col_of(&self, w: u64) -> Option<usize> {
        self.col_vectors.iter().position(|&x| x == w)
    }

    /// Row indices of the members of `subset` (which must lie in `a`).
    pub fn rows_of(&self, subset: &F2Set) -> Vec<usize> {
        let mut v: Vec<usize> = subset
            .words()
            .iter()
            .filter_map(|&w| self.row_of(w))
            .collect();
        v.sort_unstable();
        v
    }

    pub fn cols_of(&self, subset: &F2Set) -> Vec<usize> {
        let mut v: Vec<usize> = subset
            .words()
            .iter()
            .filter_map(|&w| self.col_of(w))
            .collect();
        v.sort_unstable();
        v
    }

    /// The set `{a_i : i in rows}`.
    pub fn row_set(&self, rows: &[usize]) -> F2Set {
        F2Set::from_words(self.dim, rows.iter().map(|&i| self.row_vectors[i])).expect("in range")
    }

    pub fn col_set(&self, cols: &[usize]) -> F2Set {
        F2Set::from_words(self.dim, cols.iter().map(|&j| self.col_vectors[j])).expect("in range")
    }
}

/// Factors a deduplicated matrix through its reduced row echelon basis.
///
/// `a_i` holds row `i`'s coordinates in the basis, which are its entries at
/// the pivot columns; `b_j` holds column `j` of the basis rows.
pub fn factorize_f2(m: &BoolMatrix) -> Result<Factorization> {
    if m.has_duplicate_lines() {
        return Err(Error::DuplicateLines);
    }
    let stride = m.stride();
    let mut basis: Vec<Vec<u64>> = (0..m.rows()).map(|i| m.row_words(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..m.cols() {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..basis.len()).find(|&i| basis[i][w] & bit != 0) else {
            continue;
        };
        basis.swap(rank, p);
        let pivot = basis[rank].clone();
        for (i, row) in basis.iter_mut().enumerate() {
            if i != rank && row[w] & bit != 0 {
                for k in 0..stride {
                    row[k] ^= pivot[k];
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == basis.len() {
            break;
        }
    }
    if rank > MAX_DIM {
        return Err(Error::CapExceeded {
            what: "F2 rank for factorization",
            value: rank,
            cap: MAX_DIM,
        });
    }
    basis.truncate(rank);
    let row_vectors: Vec<u64> = (0..m.rows())
        .map(|i| {
            pivots
                .iter()
                .enumerate()
                .filter(|&(_, &c)| m.get(i, c))
                .fold(0u64, |acc, (t, _)| acc | 1 << t)
        })
        .collect();
    let col_vectors: Vec<u64> = (0..m.cols())
        .map(|j| {
            basis
                .iter()
                .enumerate()
                .filter(|(_, row)| (row[j / 64] >> (j % 64)) & 1 == 1)
                .fold(0u64, |acc, (t, _)| acc | 1 << t)
        })
        .collect();
    for (i, &a) in row_vectors.iter().enumerate() {
        for (j, &b) in col_vectors.iter().enumerate() {
            if parity(a & b) != m.entry(i, j) {
                return Err(Error::InvariantViolation(format!(
                    "factorization disagrees with M at ({i}, {j})"
                )));
            }
        }
    }
    let dim = rank.max(1);
    let a = F2Set::from_words(dim, row_vectors.iter().copied())?;
    let b = F2Set::from_words(dim, col_vectors.iter().copied())?;
    debug_assert_eq!(a.len(), m.rows());
    debug_assert_eq!(b.len(), m.cols());
    Ok(Factorization {
        rank,
        dim,
        row_vectors,
        col_vectors,
        a,
        b,
    })
}
