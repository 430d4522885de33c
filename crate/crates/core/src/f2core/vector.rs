use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard representation limit; the parsing cap in [`crate::Limits`] is lower.
pub const MAX_DIM: usize = 63;

/// An element of `F_2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct F2Vector {
    n: usize,
    bits: u64,
}

#[inline]
pub fn parity(x: u64) -> u8 {
    (x.count_ones() & 1) as u8
}

pub(crate) fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::InvalidDimension(n));
    }
    Ok(())
}

impl F2Vector {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_dim(n)?;
        if bits & !mask(n) != 0 {
            return Err(Error::ValueOutOfRange { n, bits });
        }
        Ok(F2Vector { n, bits })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    /// The `i`-th standard basis vector.
    pub fn unit(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        Self::new(n, 1 << i)
    }

    /// Parses a string of `0`/`1`, most significant coordinate first.
    pub fn parse(s: &str) -> Result<Self> {
        let n = s.len();
        check_dim(n)?;
        let mut bits = 0u64;
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << (n - 1 - pos),
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        Ok(F2Vector { n, bits })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.n && (self.bits >> i) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn add(&self, other: &F2Vector) -> Result<F2Vector> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(F2Vector {
            n: self.n,
            bits: self.bits ^ other.bits,
        })
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.n).rev() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `<a, b>_2 = sum_i a_i b_i mod 2`.
pub fn inner_product(a: &F2Vector, b: &F2Vector) -> Result<u8> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(a.n, b.n));
    }
    Ok(parity(a.bits & b.bits))
}
