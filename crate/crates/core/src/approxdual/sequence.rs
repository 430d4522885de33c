use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2core::{duality_measure, CharacterTable, F2Set};
use crate::rational::{ratio, serde_str};
use crate::{Limits, Rational};

/// One set `A_i` of the sequence with its threshold and certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    /// 1-based index `i`.
    pub index: usize,
    pub set: F2Set,
    /// `eps_i`; `A_i` lies in `Spec_{eps_i}(B)`.
    #[serde(with = "serde_str")]
    pub epsilon: Rational,
    /// Bucket exponent `j_i` (absent for `i = 1`).
    pub bucket: Option<u32>,
    /// `Pr_{a,a' in A_{i-1}}[a + a' in A_i]` (absent for `i = 1`).
    #[serde(with = "opt_rational")]
    pub pair_fraction: Option<Rational>,
}

mod opt_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&r.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| {
                crate::rational::parse(&s)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
            })
            .transpose()
    }
}

/// Trace of the sumset sequence `A_1, ..., A_{t+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceState {
    pub dim: usize,
    #[serde(with = "serde_str")]
    pub k: Rational,
    /// `eps = D(A, B)`.
    #[serde(with = "serde_str")]
    pub duality: Rational,
    /// Levels `A_1 ..= A_{t+1}`.
    pub levels: Vec<Level>,
    /// Minimal `t` with `|A_{t+1}| <= K |A_t|`.
    pub t: usize,
    /// `ceil(n / log2 K)`.
    pub t_bound: usize,
}

impl SequenceState {
    /// `A_i` for 1-based `i`.
    pub fn set(&self, i: usize) -> &F2Set {
        &self.levels[i - 1].set
    }

    pub fn epsilon(&self, i: usize) -> &Rational {
        &self.levels[i - 1].epsilon
    }

    /// Recomputes both bucket inequalities at every level `i >= 2`.
    pub fn bucket_checks(&self) -> Vec<BucketCheck> {
        let n = ratio(self.dim as u64, 1);
        self.levels
            .windows(2)
            .map(|w| {
                let (prev, cur) = (&w[0], &w[1]);
                let j = cur.bucket.expect("levels after the first carry a bucket");
                let eps = &cur.epsilon;
                let hit_bound = cur.pair_fraction.as_ref().is_some_and(|f| *f >= eps / &n);
                let prev_sq = BigInt::from(prev.set.len() as u64).pow(2);
                let rhs = eps * Rational::new(prev_sq, BigInt::from(1u64 << (j + 1)) * self.dim);
                let size_bound = ratio(cur.set.len() as u64, 1) >= rhs;
                BucketCheck {
                    index: cur.index,
                    hit_bound,
                    size_bound,
                }
            })
            .collect()
    }
}

/// Outcome of the two bucket inequalities at one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketCheck {
    pub index: usize,
    /// `Pr[a + a' in A_i] >= eps_i / n`.
    pub hit_bound: bool,
    /// `|A_i| >= eps_i |A_{i-1}|^2 / (2^{j+1} n)`.
    pub size_bound: bool,
}

/// Outcome of one [`next_set`] step with the quantities of its two
/// inequalities.
#[derive(Debug, Clone, PartialEq)]
pub struct NextSet {
    pub set: F2Set,
    pub bucket: u32,
    /// `|P_j|` for the chosen bucket.
    pub bucket_pairs: u64,
    /// `Pr_{a,a'}[a + a' in Spec_{eps_next}(B)]`.
    pub spectral_fraction: Rational,
    /// `Pr_{a,a'}[a + a' in A_next]`.
    pub pair_fraction: Rational,
    /// `Pr[a + a' in A_next] >= eps_next / n`.
    pub hit_bound_holds: bool,
    /// `|A_next| >= eps_next |A_prev|^2 / (2^{j+1} n)`.
    pub size_bound_holds: bool,
}

/// `A_1 = A ∩ Spec_{eps/2}(B)` with `eps = D(A, B)`; asserts `|A_1| >= (eps/2)|A|`.
pub fn markov_restrict(a: &F2Set, b: &F2Set, limits: &Limits) -> Result<(F2Set, Rational)> {
    let table = CharacterTable::new(b, limits.dense_cap);
    markov_restrict_with(a, &table)
}

pub(crate) fn markov_restrict_with(a: &F2Set, table: &CharacterTable) -> Result<(F2Set, Rational)> {
    let d = duality_measure(a, table.set())?;
    if d.is_zero() {
        return Err(Error::ZeroDuality);
    }
    let eps1 = &d / ratio(2, 1);
    let a1 = a.filter(|x| table.in_spectrum(x, &eps1));
    if ratio(a1.len() as u64, 1) < &eps1 * ratio(a.len() as u64, 1) {
        return Err(Error::InvariantViolation(format!(
            "Markov restriction kept {} of {} elements at eps1 = {eps1}",
            a1.len(),
            a.len()
        )));
    }
    Ok((a1, eps1))
}

enum RepCounts {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl RepCounts {
    fn build(a: &F2Set, dense_cap: usize) -> Self {
        if a.dim() <= dense_cap {
            let mut c = vec![0u32; 1 << a.dim()];
            for &x in a.words() {
                for &y in a.words() {
                    c[(x ^ y) as usize] += 1;
                }
            }
            RepCounts::Dense(c)
        } else {
            let mut c = HashMap::new();
            for &x in a.words() {
                for &y in a.words() {
                    *c.entry(x ^ y).or_insert(0) += 1;
                }
            }
            RepCounts::Sparse(c)
        }
    }

    /// `(x, rep(x))` for every `x` with positive count, ascending in `x`.
    fn entries(&self) -> Vec<(u64, u32)> {
        match self {
            RepCounts::Dense(c) => c
                .iter()
                .enumerate()
                .filter(|(_, &r)| r > 0)
                .map(|(x, &r)| (x as u64, r))
                .collect(),
            RepCounts::Sparse(c) => {
                let mut v: Vec<(u64, u32)> = c.iter().map(|(&x, &r)| (x, r)).collect();
                v.sort_unstable();
                v
            }
        }
    }
}

/// One step of the sequence: among the sums `a + a'` that land in
/// `Spec_{eps_next}(B)`, bucket them by `2^j <= rep_{A_prev}(x) < 2^{j+1}`,
/// keep the bucket holding the most ordered pairs (ties go to the smaller
/// `j`), and return the sums in it.
///
/// Buckets are disjoint. `j = n` is only reachable when `A_prev` is all of
/// `F_2^n`, in which case it is the only nonempty bucket, so there are
/// never more than `n` competing buckets.
///
/// When the spectral fraction is at least `eps_next`, both inequalities
/// follow by pigeonhole and are asserted.
pub fn next_set(
    a_prev: &F2Set,
    table: &CharacterTable,
    eps_next: &Rational,
    dense_cap: usize,
) -> Result<NextSet> {
    let b = table.set();
    if a_prev.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a_prev.dim(), b.dim()));
    }
    if a_prev.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = a_prev.dim();
    let reps = RepCounts::build(a_prev, dense_cap).entries();
    let in_spec: Vec<(u64, u32)> = reps
        .into_iter()
        .filter(|&(x, _)| table.in_spectrum(x, eps_next))
        .collect();

    let bucket_of = |r: u32| (u32::BITS - 1 - r.leading_zeros()) as usize;
    let mut bucket_pairs = vec![0u64; n + 1];
    for &(_, r) in &in_spec {
        bucket_pairs[bucket_of(r)] += r as u64;
    }
    let (best_j, &best) = bucket_pairs
        .iter()
        .enumerate()
        .max_by(|p, q| p.1.cmp(q.1).then(q.0.cmp(&p.0)))
        .expect("n >= 1");
    if best == 0 {
        return Err(Error::EmptyNext);
    }
    let lo = 1u64 << best_j;
    let chosen: Vec<(u64, u32)> = in_spec
        .iter()
        .copied()
        .filter(|&(_, r)| bucket_of(r) == best_j)
        .collect();
    let set = F2Set::from_sorted_unchecked(n, chosen.iter().map(|&(x, _)| x).collect());

    let total_pairs = BigInt::from(a_prev.len() as u64).pow(2);
    let spectral_pairs: u64 = in_spec.iter().map(|&(_, r)| r as u64).sum();
    let hit_pairs: u64 = chosen.iter().map(|&(_, r)| r as u64).sum();
    let spectral_fraction = Rational::new(spectral_pairs.into(), total_pairs.clone());
    let pair_fraction = Rational::new(hit_pairs.into(), total_pairs.clone());
    let hit_bound_holds = pair_fraction >= eps_next / ratio(n as u64, 1);
    let size_rhs = eps_next * Rational::new(total_pairs, BigInt::from(2u64 * lo) * n);
    let size_bound_holds = ratio(set.len() as u64, 1) >= size_rhs;

    if spectral_fraction >= *eps_next && !(hit_bound_holds && size_bound_holds) {
        return Err(Error::InvariantViolation(format!(
            "bucket inequalities fail at j = {best_j} (hit_bound: {hit_bound_holds}, size_bound: {size_bound_holds})"
        )));
    }
    Ok(NextSet {
        set,
        bucket: best_j as u32,
        bucket_pairs: best,
        spectral_fraction,
        pair_fraction,
        hit_bound_holds,
        size_bound_holds,
    })
}

/// `log2` of a positive rational, accurate even when it underflows `f64`.
pub fn log2_rational(r: &Rational) -> f64 {
    fn log2_int(x: &BigInt) -> f64 {
        let bits = x.bits();
        if bits <= 1000 {
            num_traits::ToPrimitive::to_f64(x)
                .unwrap_or(f64::NAN)
                .log2()
        } else {
            let shift = bits - 64;
            let top: BigInt = x >> shift;
            num_traits::ToPrimitive::to_f64(&top)
                .unwrap_or(f64::NAN)
                .log2()
                + shift as f64
        }
    }
    log2_int(r.numer()) - log2_int(r.denom())
}

/// `ceil(n / log2 K)`.
pub fn stopping_bound(n: usize, k: &Rational) -> usize {
    let lk = log2_rational(k);
    ((n as f64 / lk) - 1e-9).ceil().max(0.0) as usize
}

/// `K = 2^{ceil(4n / log2 n)}`, with `n` clamped below at 2.
pub fn default_k(n: usize) -> Rational {
    let nf = n.max(2) as f64;
    let e = (4.0 * nf / nf.log2()).ceil() as u32;
    Rational::from_integer(BigInt::from(2u8).pow(e))
}

/// Builds `A_1, A_2, ...` until `|A_{t+1}| <= K |A_t|`.
pub fn run_sequence(a: &F2Set, b: &F2Set, k: &Rational, limits: &Limits) -> Result<SequenceState> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if *k <= ratio(1, 1) {
        return Err(Error::Precondition("K must exceed 1".into()));
    }
    let table = CharacterTable::new(b, limits.dense_cap);
    let duality = duality_measure(a, b)?;
    let (a1, eps1) = markov_restrict_with(a, &table)?;
    let n = a.dim();
    let t_bound = stopping_bound(n, k);
    let mut levels = vec![Level {
        index: 1,
        set: a1,
        epsilon: eps1,
        bucket: None,
        pair_fraction: None,
    }];
    loop {
        let cur = levels.last().expect("nonempty");
        let eps_next = &cur.epsilon * &cur.epsilon / ratio(2, 1);
        let step = next_set(&cur.set, &table, &eps_next, limits.dense_cap)?;
        if step.spectral_fraction < eps_next {
            return Err(Error::InvariantViolation(format!(
                "Cauchy-Schwarz/Markov bound fails at level {}",
                cur.index + 1
            )));
        }
        let stop = ratio(step.set.len() as u64, 1) <= k * ratio(cur.set.len() as u64, 1);
        let index = cur.index + 1;
        levels.push(Level {
            index,
            set: step.set,
            epsilon: eps_next,
            bucket: Some(step.bucket),
            pair_fraction: Some(step.pair_fraction),
        });
        if stop {
            let t = index - 1;
            if t > t_bound {
                return Err(Error::InvariantViolation(format!(
                    "stopping index {t} exceeds bound {t_bound}"
                )));
            }
            return Ok(SequenceState {
                dim: n,
                k: k.clone(),
                duality,
                levels,
                t,
                t_bound,
            });
        }
        if index > t_bound + 1 {
            return Err(Error::InvariantViolation(format!(
                "sequence kept growing past the bound {t_bound}"
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::random_set;
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn limits() -> Limits {
        Limits::default()
    }

    #[test]
    fn markov_examples() {
        let a = F2Set::from_words(3, [0, 0b101]).unwrap();
        let b = F2Set::from_words(3, [0b010, 0b111]).unwrap();
        let (a1, eps1) = markov_restrict(&a, &b, &limits()).unwrap();
        assert_eq!(a1, a);
        assert_eq!(eps1, ratio(1, 2));
        let full = F2Set::full(2).unwrap();
        let b = F2Set::from_words(2, [0b01]).unwrap();
        assert!(matches!(
            markov_restrict(&full, &b, &limits()),
            Err(Error::ZeroDuality)
        ));
    }

    #[test]
    fn next_set_small_example() {
        let a = F2Set::from_words(2, [0b00, 0b01]).unwrap();
        let b = F2Set::from_words(2, [0]).unwrap();
        let t = CharacterTable::new(&b, 20);
        let s = next_set(&a, &t, &ratio(1, 2), 20).unwrap();
        assert_eq!(s.bucket, 1);
        assert_eq!(s.set, a);
        assert!(s.hit_bound_holds && s.size_bound_holds);
    }

    #[test]
    fn next_set_on_subspace() {
        // V = span{e0, e1, e2}; every sum has rep = 8.
        let v = F2Set::from_words(5, 0..8).unwrap();
        let b = F2Set::from_words(5, [0b11000]).unwrap();
        let t = CharacterTable::new(&b, 20);
        let s = next_set(&v, &t, &ratio(1, 1), 20).unwrap();
        assert_eq!(s.set, v);
        assert_eq!(s.bucket, 3);
    }

    #[test]
    fn sequence_on_self_orthogonal_subspace() {
        let v = F2Set::from_words(4, [0, 0b0011, 0b1100, 0b1111]).unwrap();
        let st = run_sequence(&v, &v, &ratio(2, 1), &limits()).unwrap();
        assert!(st.duality.is_one());
        assert_eq!(st.t, 1);
        assert_eq!(st.set(2), st.set(1));
    }

    #[test]
    fn sequence_grows_from_unit_vectors() {
        let a = F2Set::from_words(6, [0, 1, 2, 4, 8]).unwrap();
        let b = F2Set::from_words(6, [0]).unwrap();
        let st = run_sequence(&a, &b, &ratio(3, 2), &limits()).unwrap();
        assert!(st.t >= 2);
        assert!(st.t <= st.t_bound);
        assert!(st
            .bucket_checks()
            .iter()
            .all(|c| c.hit_bound && c.size_bound));
        for w in st.levels.windows(2) {
            assert!(w[1].set.is_subset(&w[0].set.sumset(&w[0].set).unwrap()));
        }
    }

    #[test]
    fn default_k_stops_at_one_for_n16() {
        let k = default_k(16);
        assert_eq!(k, Rational::from_integer(BigInt::from(1u64 << 16)));
        assert_eq!(stopping_bound(16, &k), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_set(16, 40, &mut rng).unwrap();
        let b = F2Set::from_words(16, a.words().iter().map(|w| w & 0xff)).unwrap();
        if let Ok(st) = run_sequence(&a, &b, &k, &limits()) {
            assert_eq!(st.t, 1);
        }
    }

    #[test]
    fn rejects_small_k() {
        let a = F2Set::from_words(2, [0]).unwrap();
        assert!(run_sequence(&a, &a, &ratio(1, 1), &limits()).is_err());
    }

    #[test]
    fn log2_of_tiny_rationals() {
        let r = Rational::new(BigInt::from(3), BigInt::from(2).pow(3000));
        assert!((log2_rational(&r) - (3f64.log2() - 3000.0)).abs() < 1e-9);
    }
}
