//! Arithmetic and set combinatorics over `F_2^n`.
//!
//! Vectors are packed into a `u64` word with coordinate `i` at bit `i`.
//! Sets keep their members sorted by integer value, so every derived set
//! comes out in the same canonical order.

mod basis;
mod duality;
pub mod format;
mod set;
mod spectrum;
mod vector;
mod wht;

pub use basis::Basis;
pub use duality::{
    character_sum, duality_measure, duality_sum, pair_bias_mean, rep_count, CharacterTable,
};
pub use set::F2Set;
pub use spectrum::{spectrum, spectrum_direct, SpectrumResult};
pub(crate) use vector::check_dim;
pub use vector::{inner_product, parity, F2Vector, MAX_DIM};
pub use wht::wht;
