use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::rank::{rank_f2, rank_real};
use crate::error::{Error, Result};
use crate::rational::serde_str;
use crate::Rational;

/// A `k x l` matrix over `{0, 1}`, stored as packed row words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BoolMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ImpossibleParameters(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        let stride = cols.div_ceil(64);
        Ok(BoolMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> bool>(
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let k = rows.len();
        let l = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if let Some(bad) = rows.iter().find(|r| r.as_ref().len() != l) {
            return Err(Error::ImpossibleParameters(format!(
                "ragged rows: {} vs {l}",
                bad.as_ref().len()
            )));
        }
        for r in rows {
            if r.as_ref().iter().any(|&x| x > 1) {
                return Err(Error::ImpossibleParameters("entries must be 0 or 1".into()));
            }
        }
        Self::from_fn(k, l, |i, j| rows[i].as_ref()[j] == 1)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| i == j)
    }

    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| true)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn area(&self) -> usize {
        self.rows * self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.words[i * self.stride + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.get(i, j) as u8
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.words[i * self.stride + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    /// Packed words of row `i`; bits past the last column are zero.
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    pub(crate) fn stride(&self) -> usize {
        self.stride
    }

    /// Mask of valid column bits for each word of a row.
    pub(crate) fn col_mask(&self) -> Vec<u64> {
        (0..self.stride)
            .map(|w| {
                let lo = w * 64;
                let hi = (lo + 64).min(self.cols);
                if hi - lo == 64 {
                    u64::MAX
                } else {
                    (1u64 << (hi - lo)) - 1
                }
            })
            .collect()
    }

    pub fn transpose(&self) -> BoolMatrix {
        BoolMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i)).expect("nonempty")
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `Some(v)` when every entry equals `v`.
    pub fn monochromatic_value(&self) -> Option<u8> {
        match self.count_ones() {
            0 => Some(0),
            c if c == self.area() => Some(1),
            _ => None,
        }
    }

    pub fn submatrix(&self, view: &SubmatrixView) -> Result<BoolMatrix> {
        view.validate(self)?;
        Ok(
            BoolMatrix::from_fn(view.rows.len(), view.cols.len(), |i, j| {
                self.get(view.rows[i], view.cols[j])
            })
            .expect("validated view is nonempty"),
        )
    }

    /// Discrepancy `||M_0| - |M_1|| / |M|`.
    pub fn discrepancy(&self) -> Rational {
        let ones = self.count_ones() as i64;
        let zeros = self.area() as i64 - ones;
        Rational::new(
            BigInt::from((zeros - ones).abs()),
            BigInt::from(self.area()),
        )
    }

    pub fn stats(&self) -> MatrixStats {
        let ones = self.count_ones();
        MatrixStats {
            rank_real: rank_real(self),
            rank_f2: rank_f2(self),
            size: self.area(),
            zeros: self.area() - ones,
            ones,
            discrepancy: self.discrepancy(),
        }
    }

    pub fn has_duplicate_lines(&self) -> bool {
        let d = dedup(self);
        d.matrix.rows != self.rows || d.matrix.cols != self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

/// Row and column index sets into a parent matrix, both strictly ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubmatrixView {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl SubmatrixView {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        SubmatrixView { rows, cols }
    }

    pub fn whole(m: &BoolMatrix) -> Self {
        SubmatrixView {
            rows: (0..m.rows()).collect(),
            cols: (0..m.cols()).collect(),
        }
    }

    pub fn area(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    pub fn validate(&self, m: &BoolMatrix) -> Result<()> {
        let check = |idx: &[usize], len: usize, what: &str| -> Result<()> {
            if idx.is_empty() {
                return Err(Error::InvalidView(format!("empty {what} set")));
            }
            if !idx.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidView(format!(
                    "{what} indices not strictly ascending"
                )));
            }
            if let Some(&last) = idx.last() {
                if last >= len {
                    return Err(Error::IndexOutOfRange { index: last, len });
                }
            }
            Ok(())
        };
        check(&self.rows, m.rows(), "row")?;
        check(&self.cols, m.cols(), "column")
    }

    /// Number of ones inside the view.
    pub fn count_ones(&self, m: &BoolMatrix) -> usize {
        self.rows
            .iter()
            .map(|&i| self.cols.iter().filter(|&&j| m.get(i, j)).count())
            .sum()
    }

    pub fn discrepancy(&self, m: &BoolMatrix) -> Result<Rational> {
        self.validate(m)?;
        let ones = self.count_ones(m) as i64;
        let area = self.area() as i64;
        Ok(Rational::new(
            BigInt::from((area - 2 * ones).abs()),
            BigInt::from(area),
        ))
    }

    pub fn monochromatic_value(&self, m: &BoolMatrix) -> Option<u8> {
        let ones = self.count_ones(m);
        if ones == 0 {
            Some(0)
        } else if ones == self.area() {
            Some(1)
        } else {
            None
        }
    }

    pub fn transposed(&self) -> SubmatrixView {
        SubmatrixView {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }
}

/// A monochromatic rectangle with its colour.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoRect {
    pub view: SubmatrixView,
    pub value: u8,
}

impl MonoRect {
    pub fn area(&self) -> usize {
        self.view.area()
    }

    /// Total order used for tie-breaking: larger area first, then
    /// lexicographically smaller rows, then columns, then colour 0.
    pub fn better_than(&self, other: &MonoRect) -> bool {
        use std::cmp::Ordering::*;
        match self.area().cmp(&other.area()) {
            Greater => true,
            Less => false,
            Equal => {
                (&self.view.rows, &self.view.cols, self.value)
                    < (&other.view.rows, &other.view.cols, other.value)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixStats {
    pub rank_real: usize,
    pub rank_f2: usize,
    pub size: usize,
    pub zeros: usize,
    pub ones: usize,
    #[serde(with = "serde_str")]
    pub discrepancy: Rational,
}

/// Result of [`dedup`]: the compressed matrix and the index maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dedup {
    pub matrix: BoolMatrix,
    /// Original row index -> row of `matrix`.
    pub row_map: Vec<usize>,
    /// Original column index -> column of `matrix`.
    pub col_map: Vec<usize>,
    /// Row of `matrix` -> first original row it came from.
    pub row_reps: Vec<usize>,
    pub col_reps: Vec<usize>,
}

impl Dedup {
    /// Original rows represented by the given compressed rows, ascending.
    pub fn expand_rows(&self, compressed: &[usize]) -> Vec<usize> {
        expand(&self.row_map, compressed)
    }

    pub fn expand_cols(&self, compressed: &[usize]) -> Vec<usize> {
        expand(&self.col_map, compressed)
    }
}

fn expand(map: &[usize], compressed: &[usize]) -> Vec<usize> {
    let mut keep = vec![false; map.iter().max().map_or(0, |&m| m + 1)];
    for &c in compressed {
        if c < keep.len() {
            keep[c] = true;
        }
    }
    (0..map.len()).filter(|&i| keep[map[i]]).collect()
}

fn unique_lines(m: &BoolMatrix) -> (Vec<usize>, Vec<usize>) {
    let mut seen: HashMap<&[u64], usize> = HashMap::new();
    let mut map = Vec::with_capacity(m.rows());
    let mut reps = Vec::new();
    for i in 0..m.rows() {
        let next = reps.len();
        let id = *seen.entry(m.row_words(i)).or_insert(next);
        if id == next {
            reps.push(i);
        }
        map.push(id);
    }
    (map, reps)
}

/// Removes duplicate rows, then duplicate columns, keeping first occurrences.
pub fn dedup(m: &BoolMatrix) -> Dedup {
    let (row_map, row_reps) = unique_lines(m);
    let rows_only = BoolMatrix::from_fn(row_reps.len(), m.cols(), |i, j| m.get(row_reps[i], j))
        .expect("nonempty");
    let t = rows_only.transpose();
    let (col_map, col_reps) = unique_lines(&t);
    let matrix = BoolMatrix::from_fn(row_reps.len(), col_reps.len(), |i, j| {
        rows_only.get(i, col_reps[j])
    })
    .expect("nonempty");
    Dedup {
        matrix,
        row_map,
        col_map,
        row_reps,
        col_reps,
    }
}
