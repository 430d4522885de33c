use serde::Serialize;

use super::pair::DualPair;
use super::pullback::pull_back;
use super::sequence::{default_k, log2_rational, run_sequence, SequenceState};
use super::small_span::{small_span_dual, SmallSpanDual};
use crate::adcomb::{bsg_extract, pfr_extract, BsgParams, BsgResult, PfrResult, PfrStrategy};
use crate::error::{Error, ErrorClass, Result};
use crate::f2core::F2Set;
use crate::rational::{ratio, serde_str};
use crate::{Limits, Rational};

/// Certificates of the three base-case stages at level `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaseCase {
    pub bsg: BsgResult,
    pub pfr: PfrResult,
    pub small_span: SmallSpanDual,
}

/// Dual pair `(A'_i, B'_i)` at one level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelPair {
    pub level: usize,
    pub pair: DualPair,
    /// Size of the graph component used by the pull-back (absent at `t`).
    pub component_size: Option<usize>,
    /// `log2` of `(4n)^{-(t-i)} prod_{l=i}^{t} eps_{l+1}`; the remaining
    /// `poly(eps_{t+1} / nK)` factor is left symbolic.
    pub log2_m_expr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageFailure {
    pub stage: &'static str,
    pub message: String,
    pub class: ErrorClass,
}

/// Everything the pipeline computed, up to the first failing stage.
#[derive(Debug, Serialize)]
pub struct PipelineTrace {
    pub dim: usize,
    pub a_size: usize,
    pub b_size: usize,
    #[serde(with = "serde_str")]
    pub k: Rational,
    pub sequence: Option<SequenceState>,
    pub base: Option<BaseCase>,
    /// Pairs for levels `t, t-1, ..., 1`, in that order.
    pub levels: Vec<LevelPair>,
    pub pair: Option<DualPair>,
    #[serde(with = "opt_str")]
    pub a_ratio: Option<Rational>,
    #[serde(with = "opt_str")]
    pub b_ratio: Option<Rational>,
    /// `log2 (4n)^{-t}`, the shape `|A'|/|A|` is compared against.
    pub log2_shape: Option<f64>,
    pub failure: Option<StageFailure>,
    #[serde(skip)]
    pub error: Option<Error>,
}

mod opt_str {
    use serde::Serializer;

    use crate::Rational;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&r.to_string()),
            None => s.serialize_none(),
        }
    }
}

impl PipelineTrace {
    pub fn is_ok(&self) -> bool {
        self.pair.is_some()
    }

    pub fn into_result(self) -> Result<DualPair> {
        match (self.pair, self.error) {
            (Some(p), _) => Ok(p),
            (None, Some(e)) => Err(e),
            (None, None) => Err(Error::InvariantViolation(
                "pipeline ended without a result".into(),
            )),
        }
    }

    fn fail(&mut self, stage: &'static str, e: Error) {
        let e = Error::stage(stage, e);
        self.failure = Some(StageFailure {
            stage,
            message: e.to_string(),
            class: e.class(),
        });
        self.error = Some(e);
    }
}

/// BSG on `(A_t, A_{t+1})` with density `eps_{t+1}/n`, then the PFR oracle,
/// then [`small_span_dual`] against `B` at threshold `eps_t`.
pub fn base_case_dual(
    state: &SequenceState,
    b: &F2Set,
    limits: &Limits,
    bsg: &BsgParams,
) -> Result<BaseCase> {
    let t = state.t;
    let rho = state.epsilon(t + 1) / ratio(state.dim as u64, 1);
    let bsg = bsg_extract(state.set(t), state.set(t + 1), &rho, bsg)
        .map_err(|e| Error::stage("bsg", e))?;
    let pfr = pfr_extract(&bsg.subset, PfrStrategy::Auto, limits.exact_cap)
        .map_err(|e| Error::stage("pfr", e))?;
    let small_span = small_span_dual(&pfr.subset, b, state.epsilon(t), limits)
        .map_err(|e| Error::stage("small-span", e))?;
    Ok(BaseCase {
        bsg,
        pfr,
        small_span,
    })
}

fn log2_m_expr(state: &SequenceState, level: usize) -> f64 {
    let n4 = (4 * state.dim) as f64;
    let eps: f64 = (level..=state.t)
        .map(|l| log2_rational(state.epsilon(l + 1)))
        .sum();
    -((state.t - level) as f64) * n4.log2() + eps
}

/// Sequence, base case, then pull-backs down to level 1. `k = None` uses
/// [`default_k`].
pub fn find_dual_pair(
    a: &F2Set,
    b: &F2Set,
    k: Option<&Rational>,
    limits: &Limits,
    bsg: &BsgParams,
) -> PipelineTrace {
    let k = k.cloned().unwrap_or_else(|| default_k(a.dim()));
    let mut trace = PipelineTrace {
        dim: a.dim(),
        a_size: a.len(),
        b_size: b.len(),
        k: k.clone(),
        sequence: None,
        base: None,
        levels: Vec::new(),
        pair: None,
        a_ratio: None,
        b_ratio: None,
        log2_shape: None,
        failure: None,
        error: None,
    };
    let state = match run_sequence(a, b, &k, limits) {
        Ok(s) => s,
        Err(e) => {
            trace.fail("sequence", e);
            return trace;
        }
    };
    let t = state.t;
    trace.sequence = Some(state);
    let state = trace.sequence.as_ref().expect("just set");
    let base = match base_case_dual(state, b, limits, bsg) {
        Ok(base) => base,
        Err(e) => {
            // already stage-labelled
            let stage = match &e {
                Error::Stage { stage, .. } => *stage,
                _ => "base",
            };
            let inner = match e {
                Error::Stage { source, .. } => *source,
                e => e,
            };
            trace.fail(stage, inner);
            return trace;
        }
    };
    let mut levels = vec![LevelPair {
        level: t,
        pair: base.small_span.pair.clone(),
        component_size: None,
        log2_m_expr: log2_m_expr(state, t),
    }];
    let mut failure = None;
    for i in (2..=t).rev() {
        let cur = &levels.last().expect("nonempty").pair;
        if !cur.a.is_subset(state.set(i)) {
            failure = Some(Error::InvariantViolation(format!(
                "A'_{i} is not inside A_{i}"
            )));
            break;
        }
        match pull_back(state.set(i - 1), cur, state.set(i)) {
            Ok(p) => levels.push(LevelPair {
                level: i - 1,
                pair: p.pair,
                component_size: Some(p.component_size),
                log2_m_expr: log2_m_expr(state, i - 1),
            }),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    let log2_shape = -(t as f64) * ((4 * a.dim()) as f64).log2();
    trace.base = Some(base);
    trace.levels = levels;
    if let Some(e) = failure {
        trace.fail("pull-back", e);
        return trace;
    }
    let last = trace.levels.last().expect("nonempty").pair.clone();
    if !(last
        .a
        .is_subset(trace.sequence.as_ref().expect("set").set(1))
        && last.a.is_subset(a)
        && last.b.is_subset(b)
        && last.is_dual())
    {
        trace.fail(
            "verify",
            Error::InvariantViolation("final pair is not a dual pair of the inputs".into()),
        );
        return trace;
    }
    trace.a_ratio = Some(ratio(last.a.len() as u64, a.len() as u64));
    trace.b_ratio = Some(ratio(last.b.len() as u64, b.len() as u64));
    trace.log2_shape = Some(log2_shape);
    trace.pair = Some(last);
    trace
}
