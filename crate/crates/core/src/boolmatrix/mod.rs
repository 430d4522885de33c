//! Exact boolean-matrix analytics: ranks over `Q` and `F_2`, the
//! `M_{i,j} = <a_i, b_j>_2` factorization, discrepancy, and rectangle
//! search (exact, greedy, biased and through dual pairs).

mod biased;
mod factor;
pub mod format;
mod matrix;
mod mono;
mod rank;
mod via_dual;

pub use biased::{find_biased_submatrix, meets_bias_contract, BiasStrategy, BiasedView};
pub use factor::{factorize_f2, Factorization};
pub use matrix::{dedup, BoolMatrix, Dedup, MatrixStats, MonoRect, SubmatrixView};
pub use mono::{greedy_mono, max_mono_exact};
pub use rank::{rank_f2, rank_real};
pub use via_dual::{find_mono_via_dual, ViaDualResult};
