use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2core::F2Set;
use crate::rational::{ratio, serde_str};
use crate::Rational;

/// Search knobs for [`bsg_extract`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsgParams {
    pub seed: u64,
    /// Number of pivot vertices sampled.
    pub samples: usize,
}

impl Default for BsgParams {
    fn default() -> Self {
        BsgParams {
            seed: 0,
            samples: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsgResult {
    pub subset: F2Set,
    /// `|A'| / |A|`.
    #[serde(with = "serde_str")]
    pub ratio_in: Rational,
    /// `|A' + A'| / |A|`.
    #[serde(with = "serde_str")]
    pub doubling_out: Rational,
    /// Measured `Pr_{a,a'}[a + a' in S]`.
    #[serde(with = "serde_str")]
    pub density: Rational,
    /// The requested density `rho`, i.e. `1/K`.
    #[serde(with = "serde_str")]
    pub rho: Rational,
    /// `C = |S| / |A|`.
    #[serde(with = "serde_str")]
    pub c: Rational,
    /// Smallest size a candidate had to reach, `ceil(rho^2 |A| / 8)`.
    pub size_floor: usize,
    /// No sampled candidate beat `A' = A`.
    pub trivial: bool,
    pub seed: u64,
}

struct Membership<'a> {
    set: &'a F2Set,
    dense: Option<Vec<bool>>,
}

impl<'a> Membership<'a> {
    fn new(set: &'a F2Set) -> Self {
        let dense = (set.dim() <= 22).then(|| {
            let mut d = vec![false; 1 << set.dim()];
            for &w in set.words() {
                d[w as usize] = true;
            }
            d
        });
        Membership { set, dense }
    }

    #[inline]
    fn contains(&self, w: u64) -> bool {
        match &self.dense {
            Some(d) => d[w as usize],
            None => self.set.contains_word(w),
        }
    }
}

/// `Pr_{a,a' in A}[a + a' in S]` over ordered pairs.
pub fn sumset_density(a: &F2Set, s: &F2Set) -> Result<Rational> {
    if a.dim() != s.dim() {
        return Err(Error::DimensionMismatch(a.dim(), s.dim()));
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let mem = Membership::new(s);
    let hits: u64 = a
        .words()
        .iter()
        .map(|&x| a.words().iter().filter(|&&y| mem.contains(x ^ y)).count() as u64)
        .sum();
    let n = a.len() as u64;
    Ok(ratio(hits, BigInt::from(n) * BigInt::from(n)))
}

fn own_doubling(set: &F2Set) -> Rational {
    let ss = set.sumset(set).expect("same dimension");
    ratio(ss.len() as u64, set.len() as u64)
}

/// Candidate ordering: smaller `|A'+A'|/|A'|`, then larger `|A'|`, then
/// canonical word order.
fn better(cand: &(F2Set, Rational), best: &(F2Set, Rational)) -> bool {
    match cand.1.cmp(&best.1) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => match cand.0.len().cmp(&best.0.len()) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => cand.0.words() < best.0.words(),
        },
    }
}

/// Extracts a subset of `A` with small doubling from the graph on `A`
/// whose edges are the pairs summing into `S`.
///
/// Sampled pivots contribute their neighbourhood, optionally pruned to
/// members with high codegree inside it. Candidates below
/// `rho^2 |A| / 8` are discarded; the rest are scored by their own
/// doubling constant. `A` itself is always a candidate, so the result is
/// never empty for nonempty `A`.
pub fn bsg_extract(a: &F2Set, s: &F2Set, rho: &Rational, params: &BsgParams) -> Result<BsgResult> {
    if a.dim() != s.dim() {
        return Err(Error::DimensionMismatch(a.dim(), s.dim()));
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if *rho <= ratio(0, 1) {
        return Err(Error::Precondition("rho must be positive".into()));
    }
    let density = sumset_density(a, s)?;
    if density < *rho {
        return Err(Error::DensityTooLow {
            found: density.to_string(),
            required: rho.to_string(),
        });
    }
    let size = a.len();
    let floor = {
        let f = rho * rho * ratio(size as u64, 8);
        f.ceil()
            .to_integer()
            .try_into()
            .unwrap_or(usize::MAX)
            .max(1)
    };

    let mem = Membership::new(s);
    let mut pivots: Vec<u64> = a.words().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    pivots.shuffle(&mut rng);
    pivots.truncate(params.samples.max(1));

    let mut best = (a.clone(), own_doubling(a));
    let mut trivial = true;
    let half_rho = rho / ratio(2, 1);
    for &v in &pivots {
        let nbhd: Vec<u64> = a
            .words()
            .iter()
            .copied()
            .filter(|&x| mem.contains(v ^ x))
            .collect();
        if nbhd.len() < floor {
            continue;
        }
        let codeg: Vec<usize> = nbhd
            .iter()
            .map(|&x| nbhd.iter().filter(|&&y| mem.contains(x ^ y)).count())
            .collect();
        for tau in [ratio(0, 1), half_rho.clone()] {
            let need = &tau * ratio(nbhd.len() as u64, 1);
            let kept: Vec<u64> = nbhd
                .iter()
                .zip(&codeg)
                .filter(|(_, &c)| ratio(c as u64, 1) >= need)
                .map(|(&x, _)| x)
                .collect();
            if kept.len() < floor {
                continue;
            }
            let set = F2Set::from_sorted_unchecked(a.dim(), kept);
            let cand = {
                let d = own_doubling(&set);
                (set, d)
            };
            if better(&cand, &best) {
                best = cand;
                trivial = false;
            }
        }
    }
    let subset = best.0;
    let ss = subset.sumset(&subset)?;
    Ok(BsgResult {
        ratio_in: ratio(subset.len() as u64, size as u64),
        doubling_out: ratio(ss.len() as u64, size as u64),
        density,
        rho: rho.clone(),
        c: ratio(s.len() as u64, size as u64),
        size_floor: floor,
        trivial,
        seed: params.seed,
        subset,
    })
}
