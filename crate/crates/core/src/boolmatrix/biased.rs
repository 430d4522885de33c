use serde::{Deserialize, Serialize};

use super::matrix::{BoolMatrix, SubmatrixView};
use super::rank::rank_real;
use crate::error::{Error, Result};
use crate::rational::serde_str;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BiasStrategy {
    Whole,
    Greedy,
    Exact,
}

/// A submatrix meeting both `r^{-3/2}` bounds, with its measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasedView {
    pub view: SubmatrixView,
    /// `rank_real` of the parent (at least 1).
    pub rank: usize,
    pub area: usize,
    /// `|#zeros - #ones|` inside the view.
    pub imbalance: usize,
    #[serde(with = "serde_str")]
    pub discrepancy: Rational,
    pub strategy: BiasStrategy,
}

/// `area >= r^{-3/2} |M|` and `imbalance / area >= r^{-3/2}`, squared to
/// stay in integers.
pub fn meets_bias_contract(rank: usize, total: usize, area: usize, imbalance: usize) -> bool {
    let r3 = (rank.max(1) as u128).pow(3);
    let (area, total, imbalance) = (area as u128, total as u128, imbalance as u128);
    area * area * r3 >= total * total && imbalance * imbalance * r3 >= area * area
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Candidate {
    imbalance: usize,
    area: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl Candidate {
    fn better_than(&self, other: &Candidate) -> bool {
        (other.imbalance, other.area, &self.rows, &self.cols)
            < (self.imbalance, self.area, &other.rows, &other.cols)
    }
}

/// Per-column signed contributions `sum_{i in rows} (2 M_ij - 1)`.
fn column_sums(m: &BoolMatrix, rows: &[usize]) -> Vec<i64> {
    (0..m.cols())
        .map(|j| rows.iter().map(|&i| if m.get(i, j) { 1 } else { -1 }).sum())
        .collect()
}

/// Best column subset for a fixed row subset: for each sign, columns sorted
/// by contribution and every prefix length checked against the contract.
fn best_columns(m: &BoolMatrix, rows: &[usize], rank: usize, total: usize) -> Option<Candidate> {
    let sums = column_sums(m, rows);
    let mut best: Option<Candidate> = None;
    for sign in [1i64, -1] {
        let mut order: Vec<usize> = (0..m.cols()).collect();
        order.sort_by(|&a, &b| (sign * sums[b]).cmp(&(sign * sums[a])).then(a.cmp(&b)));
        let mut acc = 0i64;
        for (len, &j) in order.iter().enumerate() {
            acc += sign * sums[j];
            let area = rows.len() * (len + 1);
            if acc <= 0 {
                continue;
            }
            let imbalance = acc as usize;
            if !meets_bias_contract(rank, total, area, imbalance) {
                continue;
            }
            let mut cols = order[..=len].to_vec();
            cols.sort_unstable();
            let cand = Candidate {
                imbalance,
                area,
                rows: rows.to_vec(),
                cols,
            };
            if best.as_ref().is_none_or(|b| cand.better_than(b)) {
                best = Some(cand);
            }
        }
    }
    best
}

fn hamming(m: &BoolMatrix, a: usize, b: usize) -> usize {
    m.row_words(a)
        .iter()
        .zip(m.row_words(b))
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum()
}

/// Sign pattern of an approximate top eigenvector of `N N^T`, `N = 2M - 1`.
fn dominant_sign_split(m: &BoolMatrix) -> (Vec<usize>, Vec<usize>) {
    let (k, l) = (m.rows(), m.cols());
    let sgn = |i: usize, j: usize| if m.get(i, j) { 1.0 } else { -1.0 };
    let mut v: Vec<f64> = (0..k).map(|i| 1.0 + (i as f64) * 1e-3).collect();
    for _ in 0..50 {
        let w: Vec<f64> = (0..l)
            .map(|j| (0..k).map(|i| sgn(i, j) * v[i]).sum())
            .collect();
        let next: Vec<f64> = (0..k)
            .map(|i| (0..l).map(|j| sgn(i, j) * w[j]).sum())
            .collect();
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        v = next.into_iter().map(|x| x / norm).collect();
    }
    let pos = (0..k).filter(|&i| v[i] >= 0.0).collect();
    let neg = (0..k).filter(|&i| v[i] < 0.0).collect();
    (pos, neg)
}

fn greedy_pool(m: &BoolMatrix) -> Vec<Vec<usize>> {
    let k = m.rows();
    let mut pool: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
    for radius in [m.cols() / 8, m.cols() / 4] {
        for i in 0..k {
            let near: Vec<usize> = (0..k).filter(|&r| hamming(m, i, r) <= radius).collect();
            let far: Vec<usize> = (0..k)
                .filter(|&r| m.cols() - hamming(m, i, r) <= radius)
                .collect();
            pool.push(near);
            if !far.is_empty() {
                pool.push(far);
            }
        }
    }
    let (pos, neg) = dominant_sign_split(m);
    pool.push(pos);
    pool.push(neg);
    pool.push((0..k).collect());
    pool.retain(|p| !p.is_empty());
    pool.sort();
    pool.dedup();
    pool
}

fn best_over<I: IntoIterator<Item = Vec<usize>>>(
    m: &BoolMatrix,
    rows: I,
    rank: usize,
) -> Option<Candidate> {
    let total = m.area();
    let mut best: Option<Candidate> = None;
    for r in rows {
        if let Some(c) = best_columns(m, &r, rank, total) {
            if best.as_ref().is_none_or(|b| c.better_than(b)) {
                best = Some(c);
            }
        }
    }
    best
}

fn exact_search(m: &BoolMatrix, rank: usize) -> Option<Candidate> {
    // Enumerate the smaller side; candidates are compared in the original orientation.
    if m.cols() < m.rows() {
        let t = m.transpose();
        let total = t.area();
        let mut best: Option<Candidate> = None;
        for mask in 1u64..1 << t.rows() {
            let rows: Vec<usize> = (0..t.rows()).filter(|&i| mask >> i & 1 == 1).collect();
            if let Some(c) = best_columns(&t, &rows, rank, total) {
                let c = Candidate {
                    imbalance: c.imbalance,
                    area: c.area,
                    rows: c.cols,
                    cols: c.rows,
                };
                if best.as_ref().is_none_or(|b| c.better_than(b)) {
                    best = Some(c);
                }
            }
        }
        best
    } else {
        let subsets = (1u64..1 << m.rows()).map(|mask| {
            (0..m.rows())
                .filter(|&i| mask >> i & 1 == 1)
                .collect::<Vec<_>>()
        });
        best_over(m, subsets, rank)
    }
}

/// Finds a submatrix with area at least `r^{-3/2} |M|` and discrepancy at
/// least `r^{-3/2}`, `r = rank_real(M)`.
///
/// Strategies run in order: the whole matrix, a greedy pool of row subsets
/// (single rows, Hamming clusters, dominant sign pattern) with optimal
/// column prefixes, and exhaustive row subsets when the smaller side is at
/// most `exact_cap`. The returned view is re-measured before returning.
pub fn find_biased_submatrix(m: &BoolMatrix, exact_cap: usize) -> Result<BiasedView> {
    let rank = rank_real(m).max(1);
    let whole = SubmatrixView::whole(m);
    let total = m.area();
    let imbalance = (total as i64 - 2 * m.count_ones() as i64).unsigned_abs() as usize;

    let found = if meets_bias_contract(rank, total, total, imbalance) {
        Some((whole.clone(), BiasStrategy::Whole))
    } else if let Some(c) = best_over(m, greedy_pool(m), rank) {
        Some((
            SubmatrixView {
                rows: c.rows,
                cols: c.cols,
            },
            BiasStrategy::Greedy,
        ))
    } else if m.rows().min(m.cols()) <= exact_cap.min(63) {
        exact_search(m, rank).map(|c| {
            (
                SubmatrixView {
                    rows: c.rows,
                    cols: c.cols,
                },
                BiasStrategy::Exact,
            )
        })
    } else {
        None
    };

    let Some((view, strategy)) = found else {
        let exhaustive = m.rows().min(m.cols()) <= exact_cap;
        return Err(Error::NotFound(if exhaustive {
            format!("no submatrix meets both r^(-3/2) bounds (r = {rank}); exhaustive search ran")
        } else {
            format!("no qualifying submatrix found by heuristics (r = {rank})")
        }));
    };

    view.validate(m)?;
    let ones = view.count_ones(m);
    let area = view.area();
    let imbalance = (area as i64 - 2 * ones as i64).unsigned_abs() as usize;
    if !meets_bias_contract(rank, total, area, imbalance) {
        return Err(Error::InvariantViolation(
            "biased submatrix fails re-verification".into(),
        ));
    }
    let discrepancy = view.discrepancy(m)?;
    Ok(BiasedView {
        view,
        rank,
        area,
        imbalance,
        discrepancy,
        strategy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones_returns_whole() {
        let m = BoolMatrix::ones(3, 5).unwrap();
        let b = find_biased_submatrix(&m, 20).unwrap();
        assert_eq!(b.strategy, BiasStrategy::Whole);
        assert_eq!(b.view, SubmatrixView::whole(&m));
    }

    #[test]
    fn two_by_two_rank_two() {
        let m = BoolMatrix::from_rows(&[[1u8, 1], [1, 0]]).unwrap();
        let b = find_biased_submatrix(&m, 20).unwrap();
        assert_eq!(b.rank, 2);
        assert!(meets_bias_contract(2, 4, b.area, b.imbalance));
        // rows {0} x cols {0,1}: area 2, discrepancy 1
        let v = SubmatrixView {
            rows: vec![0],
            cols: vec![0, 1],
        };
        assert!(meets_bias_contract(2, 4, v.area(), 2));
        // the whole matrix already has discrepancy 1/2
        assert_eq!(b.strategy, BiasStrategy::Whole);
        assert_eq!((b.area, b.imbalance), (4, 2));
    }

    #[test]
    fn contract_arithmetic() {
        // r = 2: area >= 4 / 2^{3/2} ~ 1.41, so area 1 fails and area 2 passes.
        assert!(!meets_bias_contract(2, 4, 1, 1));
        assert!(meets_bias_contract(2, 4, 2, 2));
        // discrepancy 1/4 < 2^{-3/2} ~ 0.354
        assert!(!meets_bias_contract(2, 4, 4, 1));
    }

    #[test]
    fn rank_one_pattern_has_no_qualifying_view() {
        // Every row equals 10: r = 1 demands the whole matrix with discrepancy 1.
        let m = BoolMatrix::from_rows(&[[1u8, 0]]).unwrap();
        assert!(matches!(
            find_biased_submatrix(&m, 20),
            Err(Error::NotFound(_))
        ));
    }

    /// Every (row set, column set) pair, checked against the contract.
    fn brute_exists(m: &BoolMatrix) -> bool {
        let rank = rank_real(m).max(1);
        (1u32..1 << m.rows()).any(|rs| {
            (1u32..1 << m.cols()).any(|cs| {
                let v = SubmatrixView {
                    rows: (0..m.rows()).filter(|i| rs >> i & 1 == 1).collect(),
                    cols: (0..m.cols()).filter(|j| cs >> j & 1 == 1).collect(),
                };
                let ones = v.count_ones(m);
                let imb = (v.area() as i64 - 2 * ones as i64).unsigned_abs() as usize;
                meets_bias_contract(rank, m.area(), v.area(), imb)
            })
        })
    }

    #[test]
    fn rank_two_complement_rows_have_no_qualifying_view() {
        // Every view of area >= 3 has discrepancy at most 1/3 < 2^{-3/2}.
        let m = BoolMatrix::from_rows(&[[0u8, 1, 1], [1, 0, 0]]).unwrap();
        assert_eq!(rank_real(&m), 2);
        assert!(!brute_exists(&m));
        assert!(matches!(
            find_biased_submatrix(&m, 20),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn agrees_with_brute_force_on_small_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let (k, l) = (rng.gen_range(1..=4), rng.gen_range(1..=5));
            let m = BoolMatrix::from_fn(k, l, |_, _| rng.gen_bool(0.5)).unwrap();
            let found = find_biased_submatrix(&m, 20);
            assert_eq!(found.is_ok(), brute_exists(&m), "{:?}", m.to_rows());
        }
    }
}
