use std::ops::{Add, Sub};

use crate::error::{Error, Result};

/// In-place unnormalised Walsh–Hadamard transform:
/// `g(x) = sum_y f(y) (-1)^{<x,y>}`.
///
/// Applying it twice multiplies the table by its length.
pub fn wht<T>(data: &mut [T]) -> Result<()>
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let len = data.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let mut h = 1;
    while h < len {
        for block in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = a + b;
                *y = a - b;
            }
        }
        h *= 2;
    }
    Ok(())
}
