use serde::{Deserialize, Serialize};

use super::biased::{find_biased_submatrix, BiasedView};
use super::factor::factorize_f2;
use super::matrix::{dedup, BoolMatrix, MonoRect, SubmatrixView};
use crate::approxdual::DualFinder;
use crate::error::{Error, Result};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViaDualResult {
    pub rect: MonoRect,
    pub biased: BiasedView,
    /// `rank_F2` of the deduplicated biased submatrix.
    pub factor_rank: usize,
    pub pair_sizes: (usize, usize),
}

/// Biased submatrix, then `F_2` factorization, then a dual pair, read back
/// as a monochromatic rectangle of `m`.
pub fn find_mono_via_dual(
    m: &BoolMatrix,
    finder: &DualFinder,
    limits: &Limits,
) -> Result<ViaDualResult> {
    if m.has_duplicate_lines() {
        return Err(Error::DuplicateLines);
    }
    let biased =
        find_biased_submatrix(m, limits.exact_cap).map_err(|e| Error::stage("biased", e))?;
    let sub = m.submatrix(&biased.view)?;
    let compressed = dedup(&sub);
    let fac = factorize_f2(&compressed.matrix).map_err(|e| Error::stage("factorize", e))?;
    let pair = finder
        .find(&fac.a, &fac.b, limits)
        .map_err(|e| Error::stage("dual", e))?;

    let sub_rows = compressed.expand_rows(&fac.rows_of(&pair.a));
    let sub_cols = compressed.expand_cols(&fac.cols_of(&pair.b));
    let view = SubmatrixView::new(
        sub_rows.iter().map(|&i| biased.view.rows[i]).collect(),
        sub_cols.iter().map(|&j| biased.view.cols[j]).collect(),
    );
    view.validate(m)?;
    match view.monochromatic_value(m) {
        Some(v) if v == pair.constant_bit => {}
        _ => return Err(Error::MonochromaticityViolation),
    }
    Ok(ViaDualResult {
        rect: MonoRect {
            view,
            value: pair.constant_bit,
        },
        biased,
        factor_rank: fac.rank,
        pair_sizes: (pair.a.len(), pair.b.len()),
    })
}
