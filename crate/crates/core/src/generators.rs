//! Seeded instance families.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::boolmatrix::{rank_f2, rank_real, BoolMatrix};
use crate::error::{Error, Result};
use crate::f2core::{parity, Basis, F2Set};

/// Largest `n` accepted by [`ip_matrix`].
pub const IP_CAP: usize = 12;
/// Largest set any generator will materialise.
pub const SET_CAP: usize = 1 << 22;

/// `M[x][y] = <x, y>_2` over `x, y in F_2^n`, rows and columns in
/// numeric order.
pub fn ip_matrix(n: usize) -> Result<BoolMatrix> {
    if n == 0 || n > IP_CAP {
        return Err(Error::CapExceeded {
            what: "ip dimension",
            value: n,
            cap: IP_CAP,
        });
    }
    let size = 1usize << n;
    BoolMatrix::from_fn(size, size, |x, y| parity((x & y) as u64) == 1)
}

/// `M[a][b] = <a, b>_2` for `a in A`, `b in B` in canonical order.
pub fn from_sets(a: &F2Set, b: &F2Set) -> Result<BoolMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let (aw, bw) = (a.words(), b.words());
    BoolMatrix::from_fn(aw.len(), bw.len(), |i, j| parity(aw[i] & bw[j]) == 1)
}

/// Product of uniform `k x r` and `r x l` factor matrices over `F_2`,
/// redrawn until the product has `F_2` rank exactly `r`.
pub fn random_f2_rank<R: Rng>(k: usize, l: usize, r: usize, rng: &mut R) -> Result<BoolMatrix> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if r > k.min(l) || r > 63 {
        return Err(Error::ImpossibleParameters(format!(
            "rank {r} in a {k}x{l} matrix"
        )));
    }
    loop {
        let a: Vec<u64> = (0..k).map(|_| rng.gen::<u64>() & low_mask(r)).collect();
        let b: Vec<u64> = (0..l).map(|_| rng.gen::<u64>() & low_mask(r)).collect();
        let m = BoolMatrix::from_fn(k, l, |i, j| parity(a[i] & b[j]) == 1)?;
        if rank_f2(&m) == r {
            return Ok(m);
        }
    }
}

fn low_mask(r: usize) -> u64 {
    if r == 64 {
        u64::MAX
    } else {
        (1u64 << r) - 1
    }
}

/// Independent entries, each 1 with probability `p`.
pub fn random_dense<R: Rng>(k: usize, l: usize, p: f64, rng: &mut R) -> Result<BoolMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ImpossibleParameters(format!("probability {p}")));
    }
    BoolMatrix::from_fn(k, l, |_, _| rng.gen_bool(p))
}

/// Boolean matrix with real rank at most `r`, drawn from a mix of
/// structured families:
///
/// * block incidence: columns carry a label in `0..=s`, rows a subset of
///   `1..=s`, entry is 1 when the label lies in the subset (rank `<= s`);
/// * few distinct rows: every row copies one of `r` random patterns;
/// * block diagonal of small random blocks with ranks summing to `<= r`;
///
/// optionally complemented (one extra unit of rank is reserved for it).
pub fn random_real_rank<R: Rng>(k: usize, l: usize, r: usize, rng: &mut R) -> Result<BoolMatrix> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if r == 0 {
        return BoolMatrix::zeros(k, l);
    }
    loop {
        let complement = r >= 2 && rng.gen_bool(0.3);
        let budget = if complement { r - 1 } else { r };
        let m = match rng.gen_range(0..3) {
            0 => block_incidence(k, l, budget, rng)?,
            1 => few_rows(k, l, budget, rng)?,
            _ => block_diagonal(k, l, budget, rng)?,
        };
        let m = if complement {
            BoolMatrix::from_fn(k, l, |i, j| !m.get(i, j))?
        } else {
            m
        };
        if rank_real(&m) <= r {
            return Ok(m);
        }
    }
}

fn block_incidence<R: Rng>(k: usize, l: usize, s: usize, rng: &mut R) -> Result<BoolMatrix> {
    let labels: Vec<usize> = (0..l).map(|_| rng.gen_range(0..=s)).collect();
    let subsets: Vec<u64> = (0..k)
        .map(|_| rng.gen::<u64>() & (low_mask(s) << 1))
        .collect();
    BoolMatrix::from_fn(k, l, |i, j| subsets[i] >> labels[j] & 1 == 1)
}

fn few_rows<R: Rng>(k: usize, l: usize, s: usize, rng: &mut R) -> Result<BoolMatrix> {
    let patterns: Vec<Vec<bool>> = (0..s)
        .map(|_| (0..l).map(|_| rng.gen_bool(0.5)).collect())
        .collect();
    let pick: Vec<usize> = (0..k).map(|_| rng.gen_range(0..s)).collect();
    BoolMatrix::from_fn(k, l, |i, j| patterns[pick[i]][j])
}

fn block_diagonal<R: Rng>(k: usize, l: usize, s: usize, rng: &mut R) -> Result<BoolMatrix> {
    // Row and column groups; block `g` is a random matrix of rank <= its share.
    let groups = rng.gen_range(1..=s.min(k).min(l).max(1));
    let mut shares = vec![1usize; groups];
    for _ in groups..s {
        let g = rng.gen_range(0..groups);
        shares[g] += 1;
    }
    let row_group: Vec<usize> = (0..k).map(|_| rng.gen_range(0..=groups)).collect();
    let col_group: Vec<usize> = (0..l).map(|_| rng.gen_range(0..=groups)).collect();
    let mut blocks = Vec::with_capacity(groups);
    for &share in &shares {
        let patterns: Vec<Vec<bool>> = (0..share)
            .map(|_| (0..l).map(|_| rng.gen_bool(0.5)).collect())
            .collect();
        let pick: Vec<usize> = (0..k).map(|_| rng.gen_range(0..share)).collect();
        blocks.push((patterns, pick));
    }
    // group index `groups` means "outside every block"
    BoolMatrix::from_fn(k, l, |i, j| {
        let g = row_group[i];
        g < groups && col_group[j] == g && blocks[g].0[blocks[g].1[i]][j]
    })
}

/// All vectors of `F_2^n` with exactly `w` ones, ascending.
pub fn weight_slice(n: usize, w: usize) -> Result<F2Set> {
    crate::f2core::check_dim(n)?;
    if w > n {
        return Err(Error::ImpossibleParameters(format!(
            "weight {w} exceeds n = {n}"
        )));
    }
    let count = binomial(n, w);
    if count > SET_CAP as u128 {
        return Err(Error::CapExceeded {
            what: "weight slice size",
            value: count.min(usize::MAX as u128) as usize,
            cap: SET_CAP,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    if w == 0 {
        out.push(0);
    } else {
        // Gosper's hack walks the w-subsets in increasing numeric order.
        let mut x: u64 = (1u64 << w) - 1;
        let limit = 1u64 << n;
        while x < limit {
            out.push(x);
            let c = x & x.wrapping_neg();
            let r = x + c;
            x = (((r ^ x) >> 2) / c) | r;
        }
    }
    F2Set::from_words(n, out)
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Uniformly random `d`-dimensional subspace of `F_2^n`.
pub fn subspace<R: Rng>(n: usize, d: usize, rng: &mut R) -> Result<F2Set> {
    crate::f2core::check_dim(n)?;
    if d > n {
        return Err(Error::ImpossibleParameters(format!(
            "dimension {d} exceeds n = {n}"
        )));
    }
    if 1usize.checked_shl(d as u32).is_none_or(|s| s > SET_CAP) {
        return Err(Error::CapExceeded {
            what: "subspace size",
            value: d,
            cap: SET_CAP.trailing_zeros() as usize,
        });
    }
    let mut basis = Basis::new();
    while basis.rank() < d {
        basis.insert(rng.gen::<u64>() & low_mask(n));
    }
    F2Set::from_words(n, basis.span_elements())
}

/// A `d`-dimensional subspace plus `outliers` random vectors outside it.
pub fn subspace_plus_noise<R: Rng>(
    n: usize,
    d: usize,
    outliers: usize,
    rng: &mut R,
) -> Result<F2Set> {
    let v = subspace(n, d, rng)?;
    let room = (1u128 << n) - v.len() as u128;
    if outliers as u128 > room {
        return Err(Error::ImpossibleParameters(format!(
            "{outliers} outliers but only {room} vectors outside the subspace"
        )));
    }
    let mut extra = Vec::with_capacity(outliers);
    let mut seen = std::collections::HashSet::new();
    while extra.len() < outliers {
        let x = rng.gen::<u64>() & low_mask(n);
        if !v.contains_word(x) && seen.insert(x) {
            extra.push(x);
        }
    }
    F2Set::from_words(n, v.words().iter().copied().chain(extra))
}

/// `size` distinct uniform vectors of `F_2^n`.
pub fn random_set<R: Rng>(n: usize, size: usize, rng: &mut R) -> Result<F2Set> {
    crate::f2core::check_dim(n)?;
    if size as u128 > 1u128 << n || size > SET_CAP {
        return Err(Error::ImpossibleParameters(format!(
            "{size} distinct vectors in F_2^{n}"
        )));
    }
    if n <= 20 && size * 4 >= 1 << n {
        let mut all: Vec<u64> = (0..1u64 << n).collect();
        all.shuffle(rng);
        all.truncate(size);
        return F2Set::from_words(n, all);
    }
    let mut seen = std::collections::HashSet::with_capacity(size);
    while seen.len() < size {
        seen.insert(rng.gen::<u64>() & low_mask(n));
    }
    F2Set::from_words(n, seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ip_two() {
        let m = ip_matrix(2).unwrap();
        assert_eq!(
            m.to_rows(),
            vec![
                vec![0, 0, 0, 0],
                vec![0, 1, 0, 1],
                vec![0, 0, 1, 1],
                vec![0, 1, 1, 0]
            ]
        );
    }

    #[test]
    fn f2_rank_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = random_f2_rank(8, 8, 3, &mut rng).unwrap();
        assert_eq!(rank_f2(&m), 3);
        assert!(random_f2_rank(3, 5, 4, &mut rng).is_err());
    }

    #[test]
    fn real_rank_is_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for r in 1..=6 {
            for _ in 0..20 {
                let m = random_real_rank(16, 16, r, &mut rng).unwrap();
                assert!(rank_real(&m) <= r);
            }
        }
    }

    #[test]
    fn slices_and_subspaces() {
        assert_eq!(weight_slice(8, 2).unwrap().len(), 28);
        assert_eq!(weight_slice(5, 0).unwrap().words(), &[0]);
        assert_eq!(weight_slice(4, 4).unwrap().words(), &[15]);
        let w = weight_slice(6, 3).unwrap();
        assert!(w.words().iter().all(|x| x.count_ones() == 3));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = subspace(8, 3, &mut rng).unwrap();
        assert_eq!(v.len(), 8);
        assert!(v.is_subspace());
        let s = subspace_plus_noise(8, 3, 5, &mut rng).unwrap();
        assert_eq!(s.len(), 13);
        assert_eq!(random_set(10, 100, &mut rng).unwrap().len(), 100);
        assert_eq!(random_set(3, 8, &mut rng).unwrap().len(), 8);
    }

    #[test]
    fn from_sets_is_the_product_pattern() {
        let a = weight_slice(4, 1).unwrap();
        let m = from_sets(&a, &a).unwrap();
        assert_eq!(m, BoolMatrix::identity(4).unwrap());
    }
}
