use serde::{Deserialize, Serialize};

/// Size limits that switch algorithms between dense, exact and heuristic
/// paths. Every limit is a runtime setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest dimension for which full `2^n` tables are materialised.
    pub dense_cap: usize,
    /// Largest side enumerated by subset-enumeration oracles.
    pub exact_cap: usize,
    /// Largest dimension accepted when parsing set files.
    pub dim_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            dense_cap: 20,
            exact_cap: 20,
            dim_cap: 24,
        }
    }
}
