//! Additive-combinatorics extraction steps with verified outputs.
//!
//! Nothing here promises the polynomial losses of the underlying theorems;
//! every result carries the measured sizes so callers can gate on them.

mod bsg;
mod doubling;
mod pfr;

pub use bsg::{bsg_extract, sumset_density, BsgParams, BsgResult};
pub use doubling::{doubling_report, DoublingReport};
pub use pfr::{pfr_extract, PfrResult, PfrStrategy};
