use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2core::F2Set;
use crate::rational::{ratio, serde_str, to_f64};
use crate::Rational;

/// Doubling diagnostics with reference bounds evaluated at the measured `K`.
///
/// Bounds are reported as base-2 logarithms since they overflow quickly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublingReport {
    pub size: usize,
    pub sumset_size: usize,
    /// `K = |A + A| / |A|`.
    #[serde(with = "serde_str")]
    pub k: Rational,
    pub span_size: u128,
    /// `|span A| / |A|`.
    #[serde(with = "serde_str")]
    pub span_ratio: Rational,
    /// `log2(K^2 2^{K^4})`.
    pub log2_freiman_bound: f64,
    /// `log2(2^{2K})`.
    pub log2_green_tao_bound: f64,
    /// `log2(K^{-log^3 K} |A|)`, unit constant in the exponent.
    pub log2_sanders_subset: f64,
    pub within_freiman: bool,
    pub within_green_tao: bool,
}

pub fn doubling_report(a: &F2Set) -> Result<DoublingReport> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let ss = a.sumset(a)?;
    let k = ratio(ss.len() as u64, a.len() as u64);
    let span_size = a.span_size();
    let span_ratio = ratio(num_bigint::BigInt::from(span_size), a.len() as u64);
    let kf = to_f64(&k);
    let log2_freiman_bound = 2.0 * kf.log2() + kf.powi(4);
    let log2_green_tao_bound = 2.0 * kf;
    let log2_sanders_subset = (a.len() as f64).log2() - kf.log2().powi(4);
    let log2_span_ratio = (span_size as f64).log2() - (a.len() as f64).log2();
    Ok(DoublingReport {
        size: a.len(),
        sumset_size: ss.len(),
        k,
        span_size,
        span_ratio,
        log2_freiman_bound,
        log2_green_tao_bound,
        log2_sanders_subset,
        within_freiman: log2_span_ratio <= log2_freiman_bound + 1e-9,
        within_green_tao: log2_span_ratio <= log2_green_tao_bound + 1e-9,
    })
}
