//! Protocol trees from recursive monochromatic-rectangle splitting.

mod build;
mod tree;
mod verify;

pub use build::{build_protocol, default_depth_cap, MonoFinder};
pub use tree::{Annotations, ProtocolNode, ProtocolTree, Speaker, TreeStats};
pub use verify::{leaf_recurrence_audit, verify, AuditRecord, CostReport, NodeAudit};
