//! Named experiment grids. Instances run in parallel; instance `i` draws
//! from `ChaCha8Rng::seed_from_u64(seed)` on stream `i`, and rows are
//! assembled in index order, so the report bytes never depend on
//! scheduling.

use std::collections::BTreeMap;
use std::time::Instant;

use logrank_core::adcomb::doubling_report;
use logrank_core::approxdual::{exact_dual_oracle, find_dual_pair, ORACLE_HARD_CAP};
use logrank_core::boolmatrix::{find_biased_submatrix, meets_bias_contract, rank_f2, rank_real};
use logrank_core::f2core::duality_measure;
use logrank_core::generators::{
    random_real_rank, random_set, subspace, subspace_plus_noise, weight_slice,
};
use logrank_core::protocol::{build_protocol, verify};
use logrank_core::rational::{ratio, to_f64};
use logrank_core::{Error, ErrorClass, Limits, Rational, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Experiment, ExperimentArgs, MonoStrategy};
use crate::commands::{
    annihilator, bsg_params, finish, limits, mono_finder, parse_k, pipeline_assertions, Row,
};
use crate::report::{Assertion, Report, Status};
use crate::row;

/// What one instance contributes to the report.
#[derive(Default)]
struct Instance {
    row: Row,
    assertions: Vec<Assertion>,
    error: Option<Error>,
}

impl Instance {
    fn new(row: Row) -> Self {
        Instance {
            row,
            ..Default::default()
        }
    }

    fn check(&mut self, name: &str, passed: bool) {
        self.assertions.push(Assertion::new(name, passed));
    }

    fn fail(&mut self, e: Error) {
        self.row.insert("error".into(), json!(e.to_string()));
        self.error = Some(e);
    }
}

pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn run_grid<P, F>(params: &[P], seed: u64, f: F) -> Vec<Instance>
where
    P: Sync,
    F: Fn(&P, &mut ChaCha8Rng) -> Instance + Sync,
{
    params
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut rng = instance_rng(seed, i);
            let mut inst = f(p, &mut rng);
            inst.row.insert("instance".into(), json!(i));
            inst
        })
        .collect()
}

/// Folds instances into the report: rows in order, one assertion per
/// name with pass counts, and the worst status.
fn absorb(report: &mut Report, instances: Vec<Instance>) {
    let mut tally: BTreeMap<String, (usize, usize, Option<usize>)> = BTreeMap::new();
    let mut first_error = None;
    for (i, inst) in instances.into_iter().enumerate() {
        for a in inst.assertions {
            let e = tally.entry(a.name).or_default();
            e.0 += 1;
            if a.passed {
                e.1 += 1;
            } else if e.2.is_none() {
                e.2 = Some(i);
            }
        }
        if let Some(e) = inst.error {
            report.status = report.status.max(Status::of_error(&e));
            first_error.get_or_insert((i, e));
        }
        report.rows.push(inst.row);
    }
    for (name, (total, passed, first_bad)) in tally {
        let mut a = Assertion::new(name, passed == total)
            .with_detail(format!("{passed}/{total} instances"));
        if let Some(i) = first_bad {
            a = a.with_detail(format!(
                "{passed}/{total} instances, first failure at instance {i}"
            ));
        }
        report.assert(a);
    }
    if let Some((i, e)) = first_error {
        report.error = Some(format!("instance {i}: {e}"));
    }
}

pub fn run(a: ExperimentArgs) -> Result<i32> {
    let started = Instant::now();
    let limits = limits(&a.common)?;
    let name = serde_json::to_value(a.name).expect("enum name");
    let mut report = Report::new("experiment", a.common.seed, Value::Null);
    let seed = a.common.seed;
    let (config, instances, result) = match a.name {
        Experiment::DualPipeline => dual_pipeline(&a, &limits)?,
        Experiment::LogRankSweep => log_rank_sweep(&a, &limits)?,
        Experiment::Counterexample => counterexample(&a)?,
        Experiment::Doubling => doubling(&a)?,
        Experiment::NwBias => nw_bias(&a, &limits)?,
    };
    let mut config = config;
    config.insert("name".into(), name);
    config.insert("seed".into(), json!(seed));
    config.insert("exact_cap".into(), json!(limits.exact_cap));
    config.insert("dense_cap".into(), json!(limits.dense_cap));
    config.insert("format".into(), json!(a.common.format));
    report.config = Value::Object(config.into_iter().collect());
    absorb(&mut report, instances);
    report.result = result(&report.rows);
    finish(report, &a.common, started)
}

type Outcome = (
    BTreeMap<String, Value>,
    Vec<Instance>,
    Box<dyn Fn(&[Row]) -> Value>,
);

fn dims(a: &ExperimentArgs, default: &[usize]) -> Vec<usize> {
    if a.n.is_empty() {
        default.to_vec()
    } else {
        a.n.clone()
    }
}

fn cfg(pairs: Vec<(&str, Value)>) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn class_name(e: &Error) -> &'static str {
    match e.class() {
        ErrorClass::Usage => "usage",
        ErrorClass::NotFound => "not-found",
        ErrorClass::Invariant => "invariant",
    }
}

const PIPELINE_FAMILIES: [&str; 3] = ["subspace", "subspace-plus-noise", "random"];

fn dual_pipeline(a: &ExperimentArgs, limits: &Limits) -> Result<Outcome> {
    let ns = dims(a, &[8]);
    if let Some(&n) = ns.iter().find(|&&n| n == 0 || n > limits.dense_cap.min(16)) {
        return Err(Error::InvalidDimension(n));
    }
    let per_n = a.instances.unwrap_or(12);
    let k = parse_k(a.big_k.as_deref())?;
    let params: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n| (0..per_n).map(move |j| (n, j)))
        .collect();
    let seed = a.common.seed;
    let instances = run_grid(&params, seed, |&(n, j), rng| {
        let family = PIPELINE_FAMILIES[j % PIPELINE_FAMILIES.len()];
        let sets = match family {
            "subspace" => subspace(n, n / 2, rng).and_then(|v| Ok((annihilator(&v, limits)?, v))),
            "subspace-plus-noise" => subspace_plus_noise(n, n / 2, 2, rng)
                .and_then(|v| Ok((v, random_set(n, 12.min(1 << n), rng)?))),
            _ => {
                let (sa, sb) = (
                    rng.gen_range(1..=14.min(1 << n)),
                    rng.gen_range(1..=14.min(1 << n)),
                );
                random_set(n, sa, rng).and_then(|x| Ok((x, random_set(n, sb, rng)?)))
            }
        };
        let mut inst = Instance::new(row! { "n" => n, "family" => family });
        let (sa, sb) = match sets {
            Ok(s) => s,
            Err(e) => {
                inst.fail(e);
                return inst;
            }
        };
        let d = duality_measure(&sa, &sb).expect("same dimension");
        inst.row.extend(row! {
            "a_size" => sa.len(),
            "b_size" => sb.len(),
            "d" => d.to_string(),
            "d_f64" => to_f64(&d),
        });
        let trace = find_dual_pair(&sa, &sb, k.as_ref(), limits, &bsg_params(seed ^ j as u64));
        inst.assertions.extend(pipeline_assertions(&trace));
        if let Some(s) = &trace.sequence {
            inst.row.insert("t".into(), json!(s.t));
            inst.row.insert("t_bound".into(), json!(s.t_bound));
            inst.row.insert("k".into(), json!(s.k.to_string()));
        }
        let oracle = (sa.len().min(sb.len()) <= limits.exact_cap)
            .then(|| exact_dual_oracle(&sa, &sb, limits.exact_cap));
        if let Some(Ok(o)) = &oracle {
            inst.row.insert("oracle_area".into(), json!(o.area()));
        }
        match trace.into_result() {
            Ok(p) => {
                inst.row.extend(row! {
                    "pair_a" => p.a.len(),
                    "pair_b" => p.b.len(),
                    "pair_area" => p.area(),
                    "a_ratio" => ratio(p.a.len() as u64, sa.len() as u64).to_string(),
                    "b_ratio" => ratio(p.b.len() as u64, sb.len() as u64).to_string(),
                });
                if let Some(Ok(o)) = &oracle {
                    inst.row.insert(
                        "area_ratio".into(),
                        json!(ratio(p.area() as u64, o.area() as u64).to_string()),
                    );
                    inst.row
                        .insert("matches_oracle".into(), json!(p.area() == o.area()));
                    inst.check("oracle-dominates-pipeline", p.area() <= o.area());
                }
            }
            Err(e) => {
                inst.row
                    .insert("failure_class".into(), json!(class_name(&e)));
                inst.fail(e);
            }
        }
        inst
    });
    let config = cfg(vec![
        ("n", json!(ns)),
        ("instances", json!(per_n)),
        ("families", json!(PIPELINE_FAMILIES)),
        ("K", json!(a.big_k)),
    ]);
    let result = Box::new(|rows: &[Row]| {
        let found = rows.iter().filter(|r| r.contains_key("pair_area")).count();
        let compared: Vec<&Row> = rows
            .iter()
            .filter(|r| r.contains_key("matches_oracle"))
            .collect();
        let matched = compared
            .iter()
            .filter(|r| r["matches_oracle"] == json!(true))
            .count();
        json!({
            "instances": rows.len(),
            "pairs_found": found,
            "oracle_compared": compared.len(),
            "oracle_matched": matched,
        })
    });
    Ok((config, instances, result))
}

fn log_rank_sweep(a: &ExperimentArgs, limits: &Limits) -> Result<Outcome> {
    let max_rank = a.rank.unwrap_or(6);
    let (k, l) = (a.k.unwrap_or(16), a.l.unwrap_or(16));
    if max_rank == 0 || max_rank > k.min(l) {
        return Err(Error::ImpossibleParameters(format!(
            "rank {max_rank} for a {k}x{l} matrix"
        )));
    }
    let per_rank = a.instances.unwrap_or(10);
    let strategy = a.strategy.unwrap_or(MonoStrategy::Exact);
    let seed = a.common.seed;
    let k_big = parse_k(a.big_k.as_deref())?;
    let ranks: Vec<usize> = (2.min(max_rank)..=max_rank).collect();
    let params: Vec<usize> = ranks
        .iter()
        .flat_map(|&r| std::iter::repeat_n(r, per_rank))
        .collect();
    let instances = run_grid(&params, seed, |&r, rng| {
        let mut inst = Instance::new(row! { "target_rank" => r });
        let m = match random_real_rank(k, l, r, rng) {
            Ok(m) => m,
            Err(e) => {
                inst.fail(e);
                return inst;
            }
        };
        let rank = rank_real(&m);
        inst.check("rank-within-target", rank <= r);
        inst.row
            .extend(row! { "rank_real" => rank, "rank_f2" => rank_f2(&m) });
        let finder = mono_finder(strategy, k_big.clone(), rng.gen());
        let tree = match build_protocol(&m, &finder, limits, None) {
            Ok(t) => t,
            Err(e) => {
                inst.fail(e);
                return inst;
            }
        };
        match verify(&tree, &m) {
            Ok(cost) => {
                inst.check("simulation-matches-matrix", true);
                inst.check("leaves-cover-rank", cost.leaves_cover_rank);
                inst.row.extend(row! {
                    "leaves" => cost.leaves,
                    "depth" => cost.depth,
                    "internal_nodes" => cost.internal_nodes,
                    "max_bits" => cost.max_bits,
                    "fallbacks" => tree.stats.fallbacks,
                    "log2_leaves" => cost.audit.log2_leaves,
                    "r_over_log_r" => cost.audit.r_over_log_r,
                });
            }
            Err(e) => {
                inst.check("simulation-matches-matrix", false);
                inst.fail(e);
            }
        }
        inst
    });
    let config = cfg(vec![
        ("k", json!(k)),
        ("l", json!(l)),
        ("ranks", json!(ranks)),
        ("instances", json!(per_rank)),
        ("strategy", json!(strategy)),
        ("K", json!(a.big_k)),
    ]);
    // grouped by measured rank; the generator may land below its target
    let result = Box::new(|rows: &[Row]| {
        let measured: std::collections::BTreeSet<u64> = rows
            .iter()
            .filter(|x| x.contains_key("leaves"))
            .filter_map(|x| x["rank_real"].as_u64())
            .collect();
        let summary: Vec<Value> = measured
            .into_iter()
            .map(|r| {
                let r = r as usize;
                let done: Vec<&Row> = rows
                    .iter()
                    .filter(|x| x["rank_real"] == json!(r) && x.contains_key("leaves"))
                    .collect();
                let mean = |key: &str| {
                    let total: u64 = done.iter().map(|x| x[key].as_u64().unwrap_or(0)).sum();
                    (!done.is_empty()).then(|| ratio(total, done.len() as u64))
                };
                let show = |q: Option<Rational>| {
                    q.map(|q| json!({ "exact": q.to_string(), "f64": to_f64(&q) }))
                };
                json!({
                    "rank": r,
                    "instances": done.len(),
                    "mean_leaves": show(mean("leaves")),
                    "mean_depth": show(mean("depth")),
                    "r_over_log_r": if r < 2 { r as f64 } else { r as f64 / (r as f64).log2() },
                })
            })
            .collect();
        json!({ "by_rank": summary })
    });
    Ok((config, instances, result))
}

fn counterexample(a: &ExperimentArgs) -> Result<Outcome> {
    let ns = dims(a, &[6, 8, 10]);
    let w = a.w.unwrap_or(2);
    let cap = ORACLE_HARD_CAP;
    let instances = run_grid(&ns, a.common.seed, |&n, _| {
        let mut inst = Instance::new(row! { "n" => n, "w" => w });
        let slice = match weight_slice(n, w) {
            Ok(s) => s,
            Err(e) => {
                inst.fail(e);
                return inst;
            }
        };
        let d = duality_measure(&slice, &slice).expect("same dimension");
        inst.row.extend(row! {
            "size" => slice.len(),
            "d" => d.to_string(),
            "d_f64" => to_f64(&d),
        });
        match exact_dual_oracle(&slice, &slice, cap) {
            Ok(p) => {
                inst.check("pair-is-dual", p.is_dual());
                let q = ratio(p.area() as u64, (slice.len() * slice.len()) as u64);
                inst.row.extend(row! {
                    "max_area" => p.area(),
                    "pair_a" => p.a.len(),
                    "pair_b" => p.b.len(),
                    "ratio" => q.to_string(),
                    "ratio_f64" => to_f64(&q),
                });
            }
            Err(e) => inst.fail(e),
        }
        inst
    });
    let config = cfg(vec![
        ("n", json!(ns)),
        ("w", json!(w)),
        ("oracle_cap", json!(cap)),
    ]);
    let result = Box::new(|rows: &[Row]| {
        let ratios: Vec<Option<Rational>> = rows
            .iter()
            .map(|r| {
                r.get("ratio")
                    .and_then(|v| v.as_str())
                    .and_then(logrank_core::rational::parse)
            })
            .collect();
        let decreasing = ratios.iter().all(Option::is_some)
            && ratios
                .windows(2)
                .all(|w| w[1].as_ref().unwrap() < w[0].as_ref().unwrap());
        json!({ "ratio_strictly_decreasing": decreasing })
    });
    Ok((config, instances, result))
}

const DOUBLING_FAMILIES: [&str; 4] = ["subspace", "subspace-plus-noise", "random", "weight-slice"];

fn doubling(a: &ExperimentArgs) -> Result<Outcome> {
    let ns = dims(a, &[8]);
    if let Some(&n) = ns.iter().find(|&&n| !(2..=16).contains(&n)) {
        return Err(Error::InvalidDimension(n));
    }
    let per_n = a.instances.unwrap_or(8);
    let params: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n| (0..per_n).map(move |j| (n, j)))
        .collect();
    let instances = run_grid(&params, a.common.seed, |&(n, j), rng| {
        let family = DOUBLING_FAMILIES[j % DOUBLING_FAMILIES.len()];
        let mut inst = Instance::new(row! { "n" => n, "family" => family });
        let set = match family {
            "subspace" => subspace(n, n / 2, rng),
            "subspace-plus-noise" => subspace_plus_noise(n, n / 2, 3, rng),
            "random" => random_set(n, 1 << (n / 2), rng),
            _ => weight_slice(n, 2),
        };
        let rep = match set.and_then(|s| doubling_report(&s)) {
            Ok(r) => r,
            Err(e) => {
                inst.fail(e);
                return inst;
            }
        };
        inst.check("within-freiman-bound", rep.within_freiman);
        if let Value::Object(fields) = serde_json::to_value(&rep).expect("plain value") {
            inst.row.extend(fields);
        }
        inst.row.insert("k_f64".into(), json!(to_f64(&rep.k)));
        inst
    });
    let config = cfg(vec![
        ("n", json!(ns)),
        ("instances", json!(per_n)),
        ("families", json!(DOUBLING_FAMILIES)),
    ]);
    let result = Box::new(|rows: &[Row]| {
        let unit = rows
            .iter()
            .filter(|r| r.get("k") == Some(&json!("1")))
            .count();
        json!({ "instances": rows.len(), "unit_doubling": unit })
    });
    Ok((config, instances, result))
}

fn nw_bias(a: &ExperimentArgs, limits: &Limits) -> Result<Outcome> {
    let k_max = a.k.unwrap_or(12);
    let l_max = a.l.unwrap_or(12);
    let r_max = a.rank.unwrap_or(5);
    if k_max < 2 || l_max < 2 || r_max == 0 {
        return Err(Error::ImpossibleParameters(
            "need k, l >= 2 and rank >= 1".into(),
        ));
    }
    let count = a.instances.unwrap_or(100);
    let params: Vec<usize> = (0..count).collect();
    let instances = run_grid(&params, a.common.seed, |_, rng| {
        nw_instance(rng, k_max, l_max, r_max, limits)
    });
    let config = cfg(vec![
        ("k_max", json!(k_max)),
        ("l_max", json!(l_max)),
        ("rank_max", json!(r_max)),
        ("instances", json!(count)),
    ]);
    let result = Box::new(|rows: &[Row]| {
        let met = rows
            .iter()
            .filter(|r| r.get("meets_contract") == Some(&json!(true)))
            .count();
        let not_found = rows
            .iter()
            .filter(|r| r.get("found") == Some(&json!(false)))
            .count();
        let certified = rows
            .iter()
            .filter(|r| r.get("certified_infeasible") == Some(&json!(true)))
            .count();
        json!({
            "instances": rows.len(),
            "contract_met": met,
            "not_found": not_found,
            "not_found_certified_infeasible": certified,
        })
    });
    Ok((config, instances, result))
}

/// One NW-bias instance: `k, l` uniform in `2..=max`, rank uniform in
/// `1..=min(r_max, k, l)`.
fn nw_instance(
    rng: &mut ChaCha8Rng,
    k_max: usize,
    l_max: usize,
    r_max: usize,
    limits: &Limits,
) -> Instance {
    let k = rng.gen_range(2..=k_max);
    let l = rng.gen_range(2..=l_max);
    let r = rng.gen_range(1..=r_max.min(k).min(l));
    let mut inst = Instance::new(row! { "k" => k, "l" => l, "target_rank" => r });
    let m = match random_real_rank(k, l, r, rng) {
        Ok(m) => m,
        Err(e) => {
            inst.fail(e);
            return inst;
        }
    };
    inst.row.insert("rank_real".into(), json!(rank_real(&m)));
    match find_biased_submatrix(&m, limits.exact_cap) {
        Ok(b) => {
            let ok = meets_bias_contract(b.rank, m.area(), b.area, b.imbalance);
            inst.check("returned-view-meets-contract", ok);
            inst.row.extend(row! {
                "found" => true,
                "strategy" => b.strategy,
                "area" => b.area,
                "imbalance" => b.imbalance,
                "discrepancy" => b.discrepancy.to_string(),
                "meets_contract" => ok,
            });
        }
        Err(e) => {
            let certified = e.class() == ErrorClass::NotFound && k.min(l) <= limits.exact_cap;
            inst.row
                .extend(row! { "found" => false, "certified_infeasible" => certified });
            inst.fail(e);
        }
    }
    inst
}
