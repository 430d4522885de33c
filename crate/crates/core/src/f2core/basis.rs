/// Reduced echelon basis of a subspace of `F_2^n`, keyed by pivot bit.
///
/// Each stored row has a distinct leading bit and no other row has that bit
/// set, so `reduce` returns a canonical coset representative.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Basis {
    rows: Vec<u64>,
}

impl Basis {
    pub fn new() -> Self {
        Basis { rows: Vec::new() }
    }

    pub fn from_vectors<I: IntoIterator<Item = u64>>(vectors: I) -> Self {
        let mut b = Basis::new();
        for x in vectors {
            b.insert(x);
        }
        b
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Canonical representative of `x + span`.
    pub fn reduce(&self, mut x: u64) -> u64 {
        for &r in &self.rows {
            let lead = 63 - r.leading_zeros();
            if (x >> lead) & 1 == 1 {
                x ^= r;
            }
        }
        x
    }

    pub fn contains(&self, x: u64) -> bool {
        self.reduce(x) == 0
    }

    /// Adds `x`; returns `false` when it was already in the span.
    pub fn insert(&mut self, x: u64) -> bool {
        let y = self.reduce(x);
        if y == 0 {
            return false;
        }
        let lead = 63 - y.leading_zeros();
        for r in &mut self.rows {
            if (*r >> lead) & 1 == 1 {
                *r ^= y;
            }
        }
        let pos = self
            .rows
            .iter()
            .position(|&r| r.leading_zeros() > y.leading_zeros())
            .unwrap_or(self.rows.len());
        self.rows.insert(pos, y);
        true
    }

    /// All `2^rank` elements of the span, ascending.
    pub fn span_elements(&self) -> Vec<u64> {
        let mut out = vec![0u64];
        for &r in &self.rows {
            let len = out.len();
            for i in 0..len {
                out.push(out[i] ^ r);
            }
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_is_canonical_on_cosets() {
        let b = Basis::from_vectors([0b110, 0b011]);
        assert_eq!(b.rank(), 2);
        for x in 0..8u64 {
            for s in b.span_elements() {
                assert_eq!(b.reduce(x), b.reduce(x ^ s));
            }
        }
    }

    #[test]
    fn dependent_insert_is_rejected() {
        let mut b = Basis::from_vectors([0b110, 0b011]);
        assert!(!b.insert(0b101));
        assert!(b.insert(0b001));
        assert_eq!(b.span_elements().len(), 8);
    }
}
