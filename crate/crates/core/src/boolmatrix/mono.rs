use super::matrix::{BoolMatrix, MonoRect, SubmatrixView};
use crate::error::{Error, Result};

/// Row words of `m` and of its complement, indexed by colour.
struct Lines {
    by_value: [Vec<Vec<u64>>; 2],
    full: Vec<u64>,
}

impl Lines {
    fn new(m: &BoolMatrix) -> Self {
        let full = m.col_mask();
        let ones: Vec<Vec<u64>> = (0..m.rows()).map(|i| m.row_words(i).to_vec()).collect();
        let zeros = ones
            .iter()
            .map(|r| r.iter().zip(&full).map(|(w, f)| !w & f).collect())
            .collect();
        Lines {
            by_value: [zeros, ones],
            full,
        }
    }
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn popcount(a: &[u64]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

fn bits(a: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (wi, &w) in a.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            out.push(wi * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
    out
}

fn make_rect(rows: Vec<usize>, cols: Vec<usize>, value: u8, transposed: bool) -> MonoRect {
    let view = if transposed {
        SubmatrixView {
            rows: cols,
            cols: rows,
        }
    } else {
        SubmatrixView { rows, cols }
    };
    MonoRect { view, value }
}

struct Search<'a> {
    lines: &'a [Vec<u64>],
    value: u8,
    transposed: bool,
    chosen: Vec<usize>,
    best: Option<MonoRect>,
}

impl Search<'_> {
    fn best_area(&self) -> usize {
        self.best.as_ref().map_or(0, MonoRect::area)
    }

    fn dfs(&mut self, start: usize, cur: &[u64]) {
        let total = self.lines.len();
        for r in start..total {
            let next = and(cur, &self.lines[r]);
            let cnt = popcount(&next);
            if cnt == 0 {
                continue;
            }
            self.chosen.push(r);
            let area = self.chosen.len() * cnt;
            if area >= self.best_area() {
                let cand = make_rect(
                    self.chosen.clone(),
                    bits(&next),
                    self.value,
                    self.transposed,
                );
                if self.best.as_ref().is_none_or(|b| cand.better_than(b)) {
                    self.best = Some(cand);
                }
            }
            if (self.chosen.len() + total - r - 1) * cnt >= self.best_area() {
                self.dfs(r + 1, &next);
            }
            self.chosen.pop();
        }
    }
}

/// Largest monochromatic submatrix by enumerating subsets of the smaller
/// side; the other side is forced to every line constant on the subset.
///
/// Ties: larger area, then lexicographically smaller rows, then columns,
/// then colour 0.
pub fn max_mono_exact(m: &BoolMatrix, exact_cap: usize) -> Result<MonoRect> {
    let transposed = m.cols() < m.rows();
    let work = if transposed { m.transpose() } else { m.clone() };
    if work.rows() > exact_cap {
        return Err(Error::CapExceeded {
            what: "smaller matrix side",
            value: work.rows(),
            cap: exact_cap,
        });
    }
    let lines = Lines::new(&work);
    let mut best: Option<MonoRect> = None;
    for value in 0..2u8 {
        let mut s = Search {
            lines: &lines.by_value[value as usize],
            value,
            transposed,
            chosen: Vec::new(),
            best: best.clone(),
        };
        s.dfs(0, &lines.full);
        best = s.best;
    }
    Ok(best.expect("a single entry is always monochromatic"))
}

fn greedy_oriented(m: &BoolMatrix, transposed: bool) -> Option<MonoRect> {
    let lines = Lines::new(m);
    let mut best: Option<MonoRect> = None;
    for value in 0..2u8 {
        let by = &lines.by_value[value as usize];
        for start in 0..m.rows() {
            let mut cols = by[start].clone();
            if popcount(&cols) == 0 {
                continue;
            }
            let mut chosen = vec![start];
            let mut in_set = vec![false; m.rows()];
            in_set[start] = true;
            loop {
                let area = chosen.len() * popcount(&cols);
                let pick = (0..m.rows())
                    .filter(|&r| !in_set[r])
                    .map(|r| (r, (chosen.len() + 1) * popcount(&and(&cols, &by[r]))))
                    .filter(|&(_, a)| a > area)
                    .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)));
                let Some((r, _)) = pick else { break };
                cols = and(&cols, &by[r]);
                chosen.push(r);
                in_set[r] = true;
            }
            chosen.sort_unstable();
            let cand = make_rect(chosen, bits(&cols), value, transposed);
            if best.as_ref().is_none_or(|b| cand.better_than(b)) {
                best = Some(cand);
            }
        }
    }
    best
}

/// Greedy line-growing search from every starting row and column.
pub fn greedy_mono(m: &BoolMatrix) -> MonoRect {
    let a = greedy_oriented(m, false);
    let b = greedy_oriented(&m.transpose(), true);
    match (a, b) {
        (Some(a), Some(b)) => {
            if b.better_than(&a) {
                b
            } else {
                a
            }
        }
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => unreachable!("a single entry is always monochromatic"),
    }
}
