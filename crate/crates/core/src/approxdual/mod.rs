//! Approximate duality: from `D(A, B) = eps > 0` to subsets with
//! `D(A', B') = 1`.

mod oracle;
mod pair;
mod pipeline;
mod pullback;
mod sequence;
mod small_span;

pub use oracle::{exact_dual_oracle, greedy_dual, ORACLE_HARD_CAP};
pub use pair::DualPair;
pub use pipeline::{
    base_case_dual, find_dual_pair, BaseCase, LevelPair, PipelineTrace, StageFailure,
};
pub use pullback::{pull_back, PullBack};
pub use sequence::{
    default_k, log2_rational, markov_restrict, next_set, run_sequence, stopping_bound, BucketCheck,
    Level, NextSet, SequenceState,
};
pub use small_span::{small_span_dual, SmallSpanDual};

use serde::{Deserialize, Serialize};

use crate::adcomb::BsgParams;
use crate::error::Result;
use crate::f2core::F2Set;
use crate::{Limits, Rational};

/// How a dual pair is obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DualFinder {
    Pipeline {
        #[serde(with = "opt_k")]
        k: Option<Rational>,
        bsg: BsgParams,
    },
    Exact,
    Greedy,
}

mod opt_k {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&r.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| {
                crate::rational::parse(&s)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
            })
            .transpose()
    }
}

impl Default for DualFinder {
    fn default() -> Self {
        DualFinder::Pipeline {
            k: None,
            bsg: BsgParams::default(),
        }
    }
}

impl DualFinder {
    pub fn find(&self, a: &F2Set, b: &F2Set, limits: &Limits) -> Result<DualPair> {
        match self {
            DualFinder::Pipeline { k, bsg } => {
                find_dual_pair(a, b, k.as_ref(), limits, bsg).into_result()
            }
            DualFinder::Exact => exact_dual_oracle(a, b, limits.exact_cap),
            DualFinder::Greedy => greedy_dual(a, b),
        }
    }
}
