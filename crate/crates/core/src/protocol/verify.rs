use serde::{Deserialize, Serialize};

use super::tree::{ProtocolNode, ProtocolTree, Speaker};
use crate::boolmatrix::{rank_real, BoolMatrix};
use crate::error::{Error, Result};
use crate::rational::serde_str;
use crate::Rational;

/// Per-node record of the leaf recurrence audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeAudit {
    /// `root`, `root.0`, `root.1.0`, ...
    pub path: String,
    pub speaker: Speaker,
    pub area: usize,
    pub rank: usize,
    pub q_area: usize,
    #[serde(with = "serde_str")]
    pub delta: Rational,
    pub rank_r: usize,
    pub rank_s: usize,
    /// Rank of the child that contains `Q`.
    pub q_child_rank: usize,
    /// `min(rank R, rank S) <= (r + 1) / 2`.
    pub half_rank: bool,
    /// `rank(Q-child) <= (r + 1) / 2 + 1`; recorded, not asserted.
    pub q_child_within_half: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub nodes: Vec<NodeAudit>,
    /// Area and rank of the deduplicated root matrix.
    pub m: usize,
    pub r: usize,
    /// `r <= m <= 2^{2r}`.
    pub m_within_bounds: bool,
    pub log2_leaves: f64,
    /// `r / log2 r` (just `r` when `r < 2`).
    pub r_over_log_r: f64,
    /// `log2 C(ceil(log2 m) + ceil(log2 r), ceil(log2 r))`.
    pub log2_binomial_reference: f64,
    /// Mean `delta` over internal nodes, as a decimal.
    pub mean_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    /// `|M|` of the input.
    pub size: usize,
    pub rank_real: usize,
    pub leaves: usize,
    pub depth: usize,
    pub internal_nodes: usize,
    /// Most bits any input pair used.
    pub max_bits: usize,
    /// `log2 rank`, the classical lower reference for the depth.
    pub log2_rank: f64,
    /// `L >= rank - 1`.
    pub leaves_cover_rank: bool,
    pub audit: AuditRecord,
}

fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

fn log2_binomial(n: u32, k: u32) -> f64 {
    (0..k)
        .map(|i| ((n - i) as f64).log2() - ((i + 1) as f64).log2())
        .sum()
}

fn walk(node: &ProtocolNode, path: &mut String, out: &mut Vec<NodeAudit>) -> Result<()> {
    let ProtocolNode::Internal {
        speaker,
        children,
        annotations: a,
        ..
    } = node
    else {
        return Ok(());
    };
    let fail = |msg: String| Error::AuditViolation {
        path: path.clone(),
        msg,
    };
    if a.rank_r + a.rank_s > a.rank + 1 {
        return Err(fail(format!(
            "block ranks {} + {} exceed rank {} + 1",
            a.rank_r, a.rank_s, a.rank
        )));
    }
    let side_rank = match speaker {
        Speaker::Row => a.rank_r,
        Speaker::Column => a.rank_s,
    };
    if a.child_rank[1] > side_rank + 1 {
        return Err(fail(format!(
            "child holding Q has rank {} above {} + 1",
            a.child_rank[1], side_rank
        )));
    }
    if a.child_area[0] + a.q_area > a.area {
        return Err(fail(format!(
            "child 0 area {} exceeds {} - {}",
            a.child_area[0], a.area, a.q_area
        )));
    }
    if a.child_area[0] >= a.area || a.child_area[1] >= a.area || a.q_area == 0 {
        return Err(fail("area does not strictly decrease".into()));
    }
    out.push(NodeAudit {
        path: path.clone(),
        speaker: *speaker,
        area: a.area,
        rank: a.rank,
        q_area: a.q_area,
        delta: a.delta.clone(),
        rank_r: a.rank_r,
        rank_s: a.rank_s,
        q_child_rank: a.child_rank[1],
        half_rank: 2 * a.rank_r.min(a.rank_s) <= a.rank + 1,
        q_child_within_half: 2 * a.child_rank[1] <= a.rank + 3,
    });
    for (bit, child) in children.iter().enumerate() {
        let len = path.len();
        path.push_str(if bit == 0 { ".0" } else { ".1" });
        walk(child, path, out)?;
        path.truncate(len);
    }
    Ok(())
}

/// Checks the rank and area bookkeeping at every internal node and
/// collects the global leaf-count references.
pub fn leaf_recurrence_audit(tree: &ProtocolTree) -> Result<AuditRecord> {
    let mut nodes = Vec::new();
    walk(&tree.root, &mut "root".to_string(), &mut nodes)?;
    let (m, r) = match &tree.root {
        ProtocolNode::Leaf { output } => (1, *output as usize),
        ProtocolNode::Internal { annotations, .. } => (annotations.area, annotations.rank),
    };
    let m_within_bounds = r <= m && (2 * r >= usize::BITS as usize || m <= 1usize << (2 * r));
    let leaves = tree.stats.leaves;
    let r_over_log_r = if r >= 2 {
        r as f64 / (r as f64).log2()
    } else {
        r as f64
    };
    let (lm, lr) = (ceil_log2(m), ceil_log2(r));
    let mean_delta = if nodes.is_empty() {
        0.0
    } else {
        nodes
            .iter()
            .map(|n| crate::rational::to_f64(&n.delta))
            .sum::<f64>()
            / nodes.len() as f64
    };
    Ok(AuditRecord {
        nodes,
        m,
        r,
        m_within_bounds,
        log2_leaves: (leaves as f64).log2(),
        r_over_log_r,
        log2_binomial_reference: log2_binomial(lm + lr, lr),
        mean_delta,
    })
}

/// Simulates every input pair against `m` and audits the tree.
pub fn verify(tree: &ProtocolTree, m: &BoolMatrix) -> Result<CostReport> {
    if tree.rows != m.rows() {
        return Err(Error::DimensionMismatch(tree.rows, m.rows()));
    }
    if tree.cols != m.cols() {
        return Err(Error::DimensionMismatch(tree.cols, m.cols()));
    }
    let mut max_bits = 0;
    for x in 0..m.rows() {
        for y in 0..m.cols() {
            let (out, bits) = tree.simulate(x, y)?;
            if out != m.entry(x, y) {
                return Err(Error::Mismatch(x, y));
            }
            max_bits = max_bits.max(bits);
        }
    }
    let audit = leaf_recurrence_audit(tree)?;
    let leaves = tree.stats.leaves;
    if leaves > 2 * audit.m {
        return Err(Error::InvariantViolation(format!(
            "{leaves} leaves for a matrix of area {}",
            audit.m
        )));
    }
    let rank = rank_real(m);
    Ok(CostReport {
        size: m.area(),
        rank_real: rank,
        leaves,
        depth: tree.stats.depth,
        internal_nodes: tree.stats.internal_nodes,
        max_bits,
        log2_rank: if rank == 0 { 0.0 } else { (rank as f64).log2() },
        leaves_cover_rank: leaves + 1 >= rank,
        audit,
    })
}
