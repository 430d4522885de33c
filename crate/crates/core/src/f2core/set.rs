use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::basis::Basis;
use super::vector::{check_dim, mask, F2Vector};
use crate::error::{Error, Result};

/// A subset of `F_2^n` with members sorted ascending and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct F2Set {
    n: usize,
    members: Vec<u64>,
}

impl F2Set {
    pub fn empty(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(F2Set {
            n,
            members: Vec::new(),
        })
    }

    /// Builds a set from raw words, sorting and deduplicating.
    pub fn from_words<I: IntoIterator<Item = u64>>(n: usize, words: I) -> Result<Self> {
        check_dim(n)?;
        let m = mask(n);
        let mut members: Vec<u64> = words.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&w| w & !m != 0) {
            return Err(Error::ValueOutOfRange { n, bits: bad });
        }
        members.sort_unstable();
        members.dedup();
        Ok(F2Set { n, members })
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a F2Vector>>(n: usize, it: I) -> Result<Self> {
        let mut words = Vec::new();
        for v in it {
            if v.dim() != n {
                return Err(Error::DimensionMismatch(n, v.dim()));
            }
            words.push(v.bits());
        }
        Self::from_words(n, words)
    }

    /// Internal constructor for words already known to be sorted, unique and in range.
    pub(crate) fn from_sorted_unchecked(n: usize, members: Vec<u64>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        F2Set { n, members }
    }

    /// All of `F_2^n`.
    pub fn full(n: usize) -> Result<Self> {
        check_dim(n)?;
        if n > 30 {
            return Err(Error::CapExceeded {
                what: "dimension for full space",
                value: n,
                cap: 30,
            });
        }
        Ok(F2Set {
            n,
            members: (0..1u64 << n).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn words(&self) -> &[u64] {
        &self.members
    }

    pub fn vectors(&self) -> impl Iterator<Item = F2Vector> + '_ {
        let n = self.n;
        self.members
            .iter()
            .map(move |&w| F2Vector::new(n, w).expect("members are in range"))
    }

    pub fn contains_word(&self, w: u64) -> bool {
        self.members.binary_search(&w).is_ok()
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        v.dim() == self.n && self.contains_word(v.bits())
    }

    pub fn is_subset(&self, other: &F2Set) -> bool {
        self.n == other.n && self.members.iter().all(|&w| other.contains_word(w))
    }

    fn same_dim(&self, other: &F2Set) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Members selected by a predicate, keeping canonical order.
    pub fn filter<F: FnMut(u64) -> bool>(&self, mut keep: F) -> F2Set {
        F2Set {
            n: self.n,
            members: self.members.iter().copied().filter(|&w| keep(w)).collect(),
        }
    }

    pub fn intersection(&self, other: &F2Set) -> Result<F2Set> {
        self.same_dim(other)?;
        Ok(self.filter(|w| other.contains_word(w)))
    }

    pub fn union(&self, other: &F2Set) -> Result<F2Set> {
        self.same_dim(other)?;
        Self::from_words(
            self.n,
            self.members.iter().chain(other.members.iter()).copied(),
        )
    }

    /// `A + B = {a + b}`.
    pub fn sumset(&self, other: &F2Set) -> Result<F2Set> {
        self.same_dim(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(F2Set::empty(self.n).expect("dimension already checked"));
        }
        let words = if self.n <= 20 {
            let mut seen = vec![false; 1 << self.n];
            for &a in &self.members {
                for &b in &other.members {
                    seen[(a ^ b) as usize] = true;
                }
            }
            seen.iter()
                .enumerate()
                .filter(|(_, &s)| s)
                .map(|(x, _)| x as u64)
                .collect::<Vec<_>>()
        } else {
            let mut seen = HashSet::new();
            for &a in &self.members {
                for &b in &other.members {
                    seen.insert(a ^ b);
                }
            }
            let mut v: Vec<u64> = seen.into_iter().collect();
            v.sort_unstable();
            v
        };
        Ok(F2Set::from_sorted_unchecked(self.n, words))
    }

    pub fn basis(&self) -> Basis {
        Basis::from_vectors(self.members.iter().copied())
    }

    pub fn rank(&self) -> usize {
        self.basis().rank()
    }

    /// Linear span; `span(∅) = {0}`.
    pub fn span(&self) -> F2Set {
        F2Set::from_sorted_unchecked(self.n, self.basis().span_elements())
    }

    pub fn span_size(&self) -> u128 {
        1u128 << self.rank()
    }

    /// `A + A = A`, which over `F_2` means `A` is a linear subspace.
    pub fn is_subspace(&self) -> bool {
        !self.is_empty() && self.span_size() == self.len() as u128
    }
}
