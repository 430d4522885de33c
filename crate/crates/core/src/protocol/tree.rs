use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::serde_str;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Speaker {
    Row,
    Column,
}

/// Measurements taken while splitting one node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotations {
    /// Area of the node's submatrix (after global deduplication).
    pub area: usize,
    /// Area after deduplicating the node's submatrix.
    pub dedup_area: usize,
    pub rank: usize,
    /// Rank of `R = rows(Q) x (cols \ cols(Q))`.
    pub rank_r: usize,
    /// Rank of `S = (rows \ rows(Q)) x cols(Q)`.
    pub rank_s: usize,
    pub q_area: usize,
    /// `|Q| / area`.
    #[serde(with = "serde_str")]
    pub delta: Rational,
    pub q_value: u8,
    /// Areas of children 0 and 1.
    pub child_area: [usize; 2],
    pub child_rank: [usize; 2],
    /// The via-dual finder failed here and greedy search was used instead.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ProtocolNode {
    Leaf {
        output: u8,
    },
    Internal {
        speaker: Speaker,
        /// Sorted indices (into the deduplicated matrix) for which the
        /// speaker sends 1.
        split: Vec<usize>,
        children: Box<[ProtocolNode; 2]>,
        annotations: Annotations,
    },
}

impl ProtocolNode {
    pub fn leaves(&self) -> usize {
        match self {
            ProtocolNode::Leaf { .. } => 1,
            ProtocolNode::Internal { children, .. } => children[0].leaves() + children[1].leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ProtocolNode::Leaf { .. } => 0,
            ProtocolNode::Internal { children, .. } => {
                1 + children[0].depth().max(children[1].depth())
            }
        }
    }

    pub fn internal_nodes(&self) -> usize {
        match self {
            ProtocolNode::Leaf { .. } => 0,
            ProtocolNode::Internal { children, .. } => {
                1 + children[0].internal_nodes() + children[1].internal_nodes()
            }
        }
    }

    pub fn fallbacks(&self) -> usize {
        match self {
            ProtocolNode::Leaf { .. } => 0,
            ProtocolNode::Internal {
                children,
                annotations,
                ..
            } => annotations.fallback as usize + children[0].fallbacks() + children[1].fallbacks(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStats {
    pub leaves: usize,
    pub depth: usize,
    pub internal_nodes: usize,
    pub fallbacks: usize,
}

/// A protocol for a matrix, answering through its deduplication maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolTree {
    pub rows: usize,
    pub cols: usize,
    /// Original row -> row of the deduplicated matrix.
    pub row_map: Vec<usize>,
    pub col_map: Vec<usize>,
    pub stats: TreeStats,
    pub root: ProtocolNode,
}

impl ProtocolTree {
    pub(crate) fn new(root: ProtocolNode, row_map: Vec<usize>, col_map: Vec<usize>) -> Self {
        let stats = TreeStats {
            leaves: root.leaves(),
            depth: root.depth(),
            internal_nodes: root.internal_nodes(),
            fallbacks: root.fallbacks(),
        };
        ProtocolTree {
            rows: row_map.len(),
            cols: col_map.len(),
            row_map,
            col_map,
            stats,
            root,
        }
    }

    /// Runs the protocol on row `x`, column `y` of the original matrix;
    /// returns the output and the number of bits exchanged.
    pub fn simulate(&self, x: usize, y: usize) -> Result<(u8, usize)> {
        let xr = *self.row_map.get(x).ok_or(Error::IndexOutOfRange {
            index: x,
            len: self.rows,
        })?;
        let yc = *self.col_map.get(y).ok_or(Error::IndexOutOfRange {
            index: y,
            len: self.cols,
        })?;
        let mut node = &self.root;
        let mut bits = 0;
        loop {
            match node {
                ProtocolNode::Leaf { output } => return Ok((*output, bits)),
                ProtocolNode::Internal {
                    speaker,
                    split,
                    children,
                    ..
                } => {
                    let input = match speaker {
                        Speaker::Row => xr,
                        Speaker::Column => yc,
                    };
                    let bit = split.binary_search(&input).is_ok();
                    node = &children[bit as usize];
                    bits += 1;
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }
}
