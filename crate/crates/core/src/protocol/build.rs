use serde::{Deserialize, Serialize};

use super::tree::{Annotations, ProtocolNode, ProtocolTree, Speaker};
use crate::approxdual::DualFinder;
use crate::boolmatrix::{
    dedup, find_mono_via_dual, greedy_mono, max_mono_exact, rank_real, BoolMatrix, MonoRect,
    SubmatrixView,
};
use crate::error::{Error, ErrorClass, Result};
use crate::rational::ratio;
use crate::Limits;

/// How the large monochromatic rectangle `Q` is found at each node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MonoFinder {
    Exact,
    ViaDual { finder: DualFinder },
    Greedy,
}

impl MonoFinder {
    pub fn name(&self) -> &'static str {
        match self {
            MonoFinder::Exact => "exact",
            MonoFinder::ViaDual { .. } => "via-dual",
            MonoFinder::Greedy => "greedy",
        }
    }

    /// Returns the rectangle and whether the greedy fallback was used.
    fn find(&self, m: &BoolMatrix, limits: &Limits) -> Result<(MonoRect, bool)> {
        match self {
            MonoFinder::Exact => Ok((max_mono_exact(m, limits.exact_cap)?, false)),
            MonoFinder::Greedy => Ok((greedy_mono(m), false)),
            MonoFinder::ViaDual { finder } => match find_mono_via_dual(m, finder, limits) {
                Ok(r) => Ok((r.rect, false)),
                Err(e) if e.class() == ErrorClass::NotFound => Ok((greedy_mono(m), true)),
                Err(e) => Err(e),
            },
        }
    }
}

struct Builder<'a> {
    m: &'a BoolMatrix,
    finder: &'a MonoFinder,
    limits: &'a Limits,
    depth_cap: usize,
}

fn complement(all: &[usize], part: &[usize]) -> Vec<usize> {
    all.iter()
        .copied()
        .filter(|x| part.binary_search(x).is_err())
        .collect()
}

impl Builder<'_> {
    fn rank_of(&self, rows: &[usize], cols: &[usize]) -> Result<usize> {
        if rows.is_empty() || cols.is_empty() {
            return Ok(0);
        }
        Ok(rank_real(&self.m.submatrix(&SubmatrixView {
            rows: rows.to_vec(),
            cols: cols.to_vec(),
        })?))
    }

    fn build(&self, rows: Vec<usize>, cols: Vec<usize>, depth: usize) -> Result<ProtocolNode> {
        let view = SubmatrixView { rows, cols };
        if let Some(v) = view.monochromatic_value(self.m) {
            return Ok(ProtocolNode::Leaf { output: v });
        }
        if depth >= self.depth_cap {
            return Err(Error::DepthCapExceeded(self.depth_cap));
        }
        let sub = self.m.submatrix(&view)?;
        let rank = rank_real(&sub);
        let local = dedup(&sub);
        let (rect, fallback) = self.finder.find(&local.matrix, self.limits)?;
        if rect.view.monochromatic_value(&local.matrix) != Some(rect.value) {
            return Err(Error::MonochromaticityViolation);
        }
        let q_rows: Vec<usize> = local
            .expand_rows(&rect.view.rows)
            .into_iter()
            .map(|i| view.rows[i])
            .collect();
        let q_cols: Vec<usize> = local
            .expand_cols(&rect.view.cols)
            .into_iter()
            .map(|j| view.cols[j])
            .collect();
        let other_rows = complement(&view.rows, &q_rows);
        let other_cols = complement(&view.cols, &q_cols);
        let q_area = q_rows.len() * q_cols.len();
        let rank_r = self.rank_of(&q_rows, &other_cols)?;
        let rank_s = self.rank_of(&other_rows, &q_cols)?;

        let speaker = match (other_rows.is_empty(), other_cols.is_empty()) {
            (true, true) => return Err(Error::DegenerateSplit),
            (true, false) => Speaker::Column,
            (false, true) => Speaker::Row,
            (false, false) if rank_r <= rank_s => Speaker::Row,
            (false, false) => Speaker::Column,
        };
        let (split, c0, c1) = match speaker {
            Speaker::Row => (
                q_rows.clone(),
                (other_rows, view.cols.clone()),
                (q_rows, view.cols.clone()),
            ),
            Speaker::Column => (
                q_cols.clone(),
                (view.rows.clone(), other_cols),
                (view.rows.clone(), q_cols),
            ),
        };
        let child_area = [c0.0.len() * c0.1.len(), c1.0.len() * c1.1.len()];
        let child_rank = [self.rank_of(&c0.0, &c0.1)?, self.rank_of(&c1.0, &c1.1)?];
        let area = view.area();
        let annotations = Annotations {
            area,
            dedup_area: local.matrix.area(),
            rank,
            rank_r,
            rank_s,
            q_area,
            delta: ratio(q_area as u64, area as u64),
            q_value: rect.value,
            child_area,
            child_rank,
            fallback,
        };
        let child0 = self.build(c0.0, c0.1, depth + 1)?;
        let child1 = self.build(c1.0, c1.1, depth + 1)?;
        Ok(ProtocolNode::Internal {
            speaker,
            split,
            children: Box::new([child0, child1]),
            annotations,
        })
    }
}

/// Default recursion guard, `4 (k + l)` of the deduplicated matrix.
pub fn default_depth_cap(m: &BoolMatrix) -> usize {
    4 * (m.rows() + m.cols())
}

/// Recursively splits `M` along a large monochromatic rectangle `Q`: the
/// player whose off-`Q` block has the smaller rank announces whether its
/// input lies in `Q`.
pub fn build_protocol(
    m: &BoolMatrix,
    finder: &MonoFinder,
    limits: &Limits,
    depth_cap: Option<usize>,
) -> Result<ProtocolTree> {
    let global = dedup(m);
    let builder = Builder {
        m: &global.matrix,
        finder,
        limits,
        depth_cap: depth_cap.unwrap_or_else(|| default_depth_cap(&global.matrix)),
    };
    let root = builder.build(
        (0..global.matrix.rows()).collect(),
        (0..global.matrix.cols()).collect(),
        0,
    )?;
    Ok(ProtocolTree::new(root, global.row_map, global.col_map))
}
