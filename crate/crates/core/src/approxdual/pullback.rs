use serde::{Deserialize, Serialize};

use super::pair::DualPair;
use crate::error::{Error, Result};
use crate::f2core::{parity, F2Set};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PullBack {
    pub pair: DualPair,
    /// Vertices of the chosen connected component.
    pub component_size: usize,
    /// Vertices of `A_{i-1}` that touch at least one edge.
    pub covered: usize,
    pub components: usize,
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Lifts a dual pair `(A'_i, B'_i)` with `A'_i ⊆ A_i ⊆ A_{i-1} + A_{i-1}`
/// to a dual pair with first set inside `A_{i-1}`.
///
/// Vertices are `A_{i-1}`, with `a ~ a'` when `a + a' in A'_i`. Along an
/// edge the products with `B'_i` either agree (bit 0) or flip (bit 1), so
/// one component works against half of `B'_i`.
pub fn pull_back(a_prev: &F2Set, pair: &DualPair, a_i: &F2Set) -> Result<PullBack> {
    if a_prev.dim() != pair.a.dim() {
        return Err(Error::DimensionMismatch(a_prev.dim(), pair.a.dim()));
    }
    if !pair.a.is_subset(a_i) {
        return Err(Error::Precondition("dual pair is not inside A_i".into()));
    }
    let words = a_prev.words();
    let mut dsu = Dsu::new(words.len());
    let mut touched = vec![false; words.len()];
    for (i, &x) in words.iter().enumerate() {
        for &s in pair.a.words() {
            if let Ok(j) = words.binary_search(&(x ^ s)) {
                touched[i] = true;
                touched[j] = true;
                dsu.union(i, j);
            }
        }
    }
    if !touched.iter().any(|&t| t) {
        return Err(Error::GraphEmpty);
    }
    let mut sizes = vec![0usize; words.len()];
    for i in 0..words.len() {
        if touched[i] {
            let r = dsu.find(i);
            sizes[r] += 1;
        }
    }
    // Roots are the smallest index in their component, so ties on size
    // resolve to the component holding the smallest vertex.
    let (root, &size) = sizes
        .iter()
        .enumerate()
        .max_by(|p, q| p.1.cmp(q.1).then(q.0.cmp(&p.0)))
        .expect("nonempty");
    let components = sizes.iter().filter(|&&s| s > 0).count();
    let comp: Vec<u64> = (0..words.len())
        .filter(|&i| touched[i] && dsu.find(i) == root)
        .map(|i| words[i])
        .collect();

    let anchor = comp[0];
    let (b0, b1): (Vec<u64>, Vec<u64>) = pair
        .b
        .words()
        .iter()
        .partition(|&&y| parity(anchor & y) == 0);
    let b_side = if b1.len() > b0.len() { b1 } else { b0 };
    let a_side = if pair.constant_bit == 0 {
        comp
    } else {
        let probe = b_side[0];
        let (s0, s1): (Vec<u64>, Vec<u64>) =
            comp.into_iter().partition(|&x| parity(x & probe) == 0);
        if s1.len() > s0.len() {
            s1
        } else {
            s0
        }
    };
    let n = a_prev.dim();
    let lifted = DualPair::new(F2Set::from_words(n, a_side)?, F2Set::from_words(n, b_side)?)?;
    if 2 * lifted.b.len() < pair.b.len() {
        return Err(Error::InvariantViolation(
            "pull-back lost more than half of B'".into(),
        ));
    }
    Ok(PullBack {
        pair: lifted,
        component_size: size,
        covered: touched.iter().filter(|&&t| t).count(),
        components,
    })
}
