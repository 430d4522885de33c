use std::collections::BTreeMap;
use std::time::Instant;

use logrank_core::adcomb::BsgParams;
use logrank_core::approxdual::{find_dual_pair, PipelineTrace};
use logrank_core::boolmatrix::format::write_matrix;
use logrank_core::boolmatrix::{
    dedup, factorize_f2, find_biased_submatrix, find_mono_via_dual, greedy_mono, max_mono_exact,
    meets_bias_contract,
};
use logrank_core::f2core::format::write_set;
use logrank_core::f2core::{duality_measure, parity, MAX_DIM};
use logrank_core::generators::{
    from_sets, ip_matrix, random_dense, random_f2_rank, random_real_rank, random_set, subspace,
    subspace_plus_noise, weight_slice,
};
use logrank_core::protocol::{build_protocol, verify};
use logrank_core::rational::{parse as parse_rational, to_f64};
use logrank_core::{
    BoolMatrix, DualFinder, Error, Limits, MonoFinder, MonoRect, ProtocolTree, Rational, Result,
    SubmatrixView,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::Format;
use crate::args::*;
use crate::experiments;
use crate::io::{emit, read_matrix, read_set, read_text};
use crate::report::{Assertion, Report};

pub type Row = BTreeMap<String, Value>;

/// Builds a report row from `key => value` pairs.
#[macro_export]
macro_rules! row {
    ($($k:expr => $v:expr),* $(,)?) => {
        $crate::commands::Row::from([$(($k.to_string(), serde_json::json!($v))),*])
    };
}

/// Runs one parsed invocation; returns the process exit code. Errors are
/// usage-class failures (bad input, bad parameters, I/O).
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::GenMatrix(a) => gen_matrix(a),
        Command::GenSets(a) => gen_sets(a),
        Command::Analyze(a) => analyze(a),
        Command::Factor(a) => factor(a),
        Command::Dual(a) => dual(a),
        Command::Mono(a) => mono(a),
        Command::Protocol(a) => protocol(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Experiment(a) => experiments::run(a),
    }
}

pub fn limits(c: &Common) -> Result<Limits> {
    if c.exact_cap > logrank_core::approxdual::ORACLE_HARD_CAP {
        return Err(Error::CapExceeded {
            what: "--exact-cap",
            value: c.exact_cap,
            cap: logrank_core::approxdual::ORACLE_HARD_CAP,
        });
    }
    if c.dense_cap > 26 {
        return Err(Error::CapExceeded {
            what: "--dense-cap",
            value: c.dense_cap,
            cap: 26,
        });
    }
    Ok(Limits {
        dense_cap: c.dense_cap,
        exact_cap: c.exact_cap,
        ..Limits::default()
    })
}

pub fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::ImpossibleParameters(format!("{flag} is required")))
}

pub fn parse_k(s: Option<&str>) -> Result<Option<Rational>> {
    s.map(|s| {
        parse_rational(s)
            .ok_or_else(|| Error::ImpossibleParameters(format!("--K {s:?} is not a rational")))
    })
    .transpose()
}

pub fn bsg_params(seed: u64) -> BsgParams {
    BsgParams {
        seed,
        ..BsgParams::default()
    }
}

pub fn mono_finder(strategy: MonoStrategy, k: Option<Rational>, seed: u64) -> MonoFinder {
    match strategy {
        MonoStrategy::Exact => MonoFinder::Exact,
        MonoStrategy::Greedy => MonoFinder::Greedy,
        MonoStrategy::ViaDual => MonoFinder::ViaDual {
            finder: DualFinder::Pipeline {
                k,
                bsg: bsg_params(seed),
            },
        },
    }
}

/// Serializes `report` in the requested format and writes it out.
pub fn finish(mut report: Report, c: &Common, started: Instant) -> Result<i32> {
    if c.timings {
        report
            .timings_ms
            .get_or_insert_with(BTreeMap::new)
            .insert("total".into(), started.elapsed().as_secs_f64() * 1e3);
    }
    let text = match c.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    emit(&text, c.out.as_deref())?;
    Ok(report.status.exit_code())
}

fn config<T: serde::Serialize>(args: T, c: &Common) -> Value {
    let mut v = serde_json::to_value(args).expect("plain config");
    if let Value::Object(map) = &mut v {
        map.insert(
            "common".into(),
            serde_json::to_value(c).expect("plain config"),
        );
    }
    v
}

fn gen_matrix(a: GenMatrixArgs) -> Result<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let m = match a.family {
        MatrixFamily::Ip => ip_matrix(need(a.n, "--n")?)?,
        MatrixFamily::RandomF2Rank => random_f2_rank(
            need(a.k, "--k")?,
            need(a.l, "--l")?,
            need(a.rank, "--rank")?,
            &mut rng,
        )?,
        MatrixFamily::RandomDense => {
            random_dense(need(a.k, "--k")?, need(a.l, "--l")?, a.p, &mut rng)?
        }
        MatrixFamily::RandomRealRank => random_real_rank(
            need(a.k, "--k")?,
            need(a.l, "--l")?,
            need(a.rank, "--rank")?,
            &mut rng,
        )?,
        MatrixFamily::FromSets => {
            let limits = limits(&a.common)?;
            let sa = read_set(need(a.a.as_deref(), "--a")?, &limits)?;
            let sb = read_set(need(a.b.as_deref(), "--b")?, &limits)?;
            from_sets(&sa, &sb)?
        }
    };
    let family = serde_json::to_value(a.family).expect("enum name");
    let text = format!(
        "# {} seed {}\n{}",
        family.as_str().unwrap_or_default(),
        a.common.seed,
        write_matrix(&m)
    );
    emit(&text, a.common.out.as_deref())?;
    Ok(0)
}

fn gen_sets(a: GenSetsArgs) -> Result<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let s = match a.family {
        SetFamily::WeightSlice => weight_slice(a.n, need(a.w, "--w")?)?,
        SetFamily::Subspace => subspace(a.n, need(a.d, "--d")?, &mut rng)?,
        SetFamily::SubspacePlusNoise => {
            subspace_plus_noise(a.n, need(a.d, "--d")?, a.outliers, &mut rng)?
        }
        SetFamily::Random => random_set(a.n, need(a.size, "--size")?, &mut rng)?,
    };
    emit(&write_set(&s), a.common.out.as_deref())?;
    Ok(0)
}

fn analyze(a: MatrixArgs) -> Result<i32> {
    let started = Instant::now();
    let limits = limits(&a.common)?;
    let m = read_matrix(&a.matrix)?;
    let mut report = Report::new(
        "analyze",
        a.common.seed,
        config(json!({ "matrix": a.matrix }), &a.common),
    );
    let stats = m.stats();
    let compressed = dedup(&m);
    let mut row = row! {
        "rows" => m.rows(),
        "cols" => m.cols(),
        "rank_real" => stats.rank_real,
        "rank_f2" => stats.rank_f2,
        "ones" => stats.ones,
        "zeros" => stats.zeros,
        "discrepancy" => stats.discrepancy.to_string(),
        "dedup_rows" => compressed.matrix.rows(),
        "dedup_cols" => compressed.matrix.cols(),
    };
    let biased = match find_biased_submatrix(&m, limits.exact_cap) {
        Ok(b) => {
            report.assert(Assertion::new(
                "biased-contract",
                meets_bias_contract(b.rank, m.area(), b.area, b.imbalance),
            ));
            row.insert("biased_area".into(), json!(b.area));
            row.insert("biased_imbalance".into(), json!(b.imbalance));
            serde_json::to_value(&b).expect("plain value")
        }
        Err(e) => {
            report.fail(&e);
            Value::Null
        }
    };
    report.result = json!({
        "stats": stats,
        "has_duplicate_lines": m.has_duplicate_lines(),
        "dedup": { "rows": compressed.matrix.rows(), "cols": compressed.matrix.cols() },
        "biased": biased,
    });
    report.rows.push(row);
    finish(report, &a.common, started)
}

fn factor(a: MatrixArgs) -> Result<i32> {
    let started = Instant::now();
    let m = read_matrix(&a.matrix)?;
    let mut report = Report::new(
        "factor",
        a.common.seed,
        config(json!({ "matrix": a.matrix }), &a.common),
    );
    let compressed = dedup(&m);
    let fac = factorize_f2(&compressed.matrix)?;
    let row_vectors: Vec<u64> = compressed
        .row_map
        .iter()
        .map(|&i| fac.row_vectors[i])
        .collect();
    let col_vectors: Vec<u64> = compressed
        .col_map
        .iter()
        .map(|&j| fac.col_vectors[j])
        .collect();
    let exact = (0..m.rows())
        .all(|i| (0..m.cols()).all(|j| parity(row_vectors[i] & col_vectors[j]) == m.entry(i, j)));
    report.assert(Assertion::new("factorization-reproduces-matrix", exact));
    report.rows.push(row! {
        "rank_f2" => fac.rank,
        "dim" => fac.dim,
        "a_size" => fac.a.len(),
        "b_size" => fac.b.len(),
    });
    report.result = json!({
        "rank_f2": fac.rank,
        "dim": fac.dim,
        "row_vectors": row_vectors,
        "col_vectors": col_vectors,
        "a": fac.a,
        "b": fac.b,
    });
    finish(report, &a.common, started)
}

/// Runtime checks on a pipeline trace: the pair, the stopping bound and
/// both bucket inequalities at every level.
pub fn pipeline_assertions(trace: &PipelineTrace) -> Vec<Assertion> {
    let mut out = Vec::new();
    if let Some(p) = &trace.pair {
        out.push(Assertion::new("pair-is-dual", p.is_dual()));
    }
    if let Some(s) = &trace.sequence {
        out.push(
            Assertion::new("t-within-bound", s.t <= s.t_bound)
                .with_detail(format!("t = {}, bound = {}", s.t, s.t_bound)),
        );
        let checks = s.bucket_checks();
        let bad6: Vec<usize> = checks
            .iter()
            .filter(|c| !c.hit_bound)
            .map(|c| c.index)
            .collect();
        let bad7: Vec<usize> = checks
            .iter()
            .filter(|c| !c.size_bound)
            .map(|c| c.index)
            .collect();
        out.push(detail_levels(
            Assertion::new("hit_bound-every-level", bad6.is_empty()),
            &bad6,
        ));
        out.push(detail_levels(
            Assertion::new("size_bound-every-level", bad7.is_empty()),
            &bad7,
        ));
    }
    out
}

fn detail_levels(a: Assertion, bad: &[usize]) -> Assertion {
    if bad.is_empty() {
        a
    } else {
        a.with_detail(format!("levels {bad:?}"))
    }
}

fn dual(a: DualArgs) -> Result<i32> {
    let started = Instant::now();
    let limits = limits(&a.common)?;
    let k = parse_k(a.big_k.as_deref())?;
    let sa = read_set(&a.a, &limits)?;
    let sb = read_set(&a.b, &limits)?;
    let mut report = Report::new(
        "dual",
        a.common.seed,
        config(
            json!({ "a": a.a, "b": a.b, "strategy": a.strategy, "K": a.big_k }),
            &a.common,
        ),
    );
    let d = duality_measure(&sa, &sb)?;
    let mut row = row! {
        "n" => sa.dim(),
        "a_size" => sa.len(),
        "b_size" => sb.len(),
        "d" => d.to_string(),
        "d_f64" => to_f64(&d),
    };
    let pair = match a.strategy {
        DualStrategy::Pipeline => {
            let trace = find_dual_pair(&sa, &sb, k.as_ref(), &limits, &bsg_params(a.common.seed));
            for x in pipeline_assertions(&trace) {
                report.assert(x);
            }
            if let Some(s) = &trace.sequence {
                row.insert("t".into(), json!(s.t));
                row.insert("t_bound".into(), json!(s.t_bound));
            }
            report.result = serde_json::to_value(&trace).expect("plain value");
            trace.into_result()
        }
        DualStrategy::Exact => DualFinder::Exact.find(&sa, &sb, &limits),
        DualStrategy::Greedy => DualFinder::Greedy.find(&sa, &sb, &limits),
    };
    match pair {
        Ok(p) => {
            if a.strategy != DualStrategy::Pipeline {
                report.assert(Assertion::new("pair-is-dual", p.is_dual()));
                report.result = json!({ "pair": p });
            }
            row.insert("pair_a".into(), json!(p.a.len()));
            row.insert("pair_b".into(), json!(p.b.len()));
            row.insert("area".into(), json!(p.area()));
            row.insert("constant_bit".into(), json!(p.constant_bit));
        }
        Err(e)
            if e.class() == logrank_core::ErrorClass::Usage
                && a.strategy != DualStrategy::Pipeline =>
        {
            return Err(e)
        }
        Err(e) => report.fail(&e),
    }
    report.rows.push(row);
    finish(report, &a.common, started)
}

/// Finds a monochromatic rectangle of `m` itself; the via-dual route
/// works on the deduplicated matrix and expands the answer back.
pub fn find_mono(m: &BoolMatrix, finder: &MonoFinder, limits: &Limits) -> Result<MonoRect> {
    match finder {
        MonoFinder::Exact => max_mono_exact(m, limits.exact_cap),
        MonoFinder::Greedy => Ok(greedy_mono(m)),
        MonoFinder::ViaDual { finder } => {
            let compressed = dedup(m);
            let r = find_mono_via_dual(&compressed.matrix, finder, limits)?;
            Ok(MonoRect {
                view: SubmatrixView::new(
                    compressed.expand_rows(&r.rect.view.rows),
                    compressed.expand_cols(&r.rect.view.cols),
                ),
                value: r.rect.value,
            })
        }
    }
}

fn mono(a: MonoArgs) -> Result<i32> {
    let started = Instant::now();
    let limits = limits(&a.common)?;
    let m = read_matrix(&a.matrix)?;
    let finder = mono_finder(a.strategy, parse_k(a.big_k.as_deref())?, a.common.seed);
    let mut report = Report::new(
        "mono",
        a.common.seed,
        config(
            json!({ "matrix": a.matrix, "strategy": a.strategy, "K": a.big_k }),
            &a.common,
        ),
    );
    match find_mono(&m, &finder, &limits) {
        Ok(rect) => {
            report.assert(Assertion::new(
                "rectangle-is-monochromatic",
                rect.view.validate(&m).is_ok()
                    && rect.view.monochromatic_value(&m) == Some(rect.value),
            ));
            report.rows.push(row! {
                "rows" => m.rows(),
                "cols" => m.cols(),
                "area" => rect.area(),
                "value" => rect.value,
                "rect_rows" => rect.view.rows.len(),
                "rect_cols" => rect.view.cols.len(),
            });
            report.result = json!({ "rect": rect, "area": rect.area() });
        }
        Err(e) if e.class() == logrank_core::ErrorClass::Usage => return Err(e),
        Err(e) => report.fail(&e),
    }
    finish(report, &a.common, started)
}

fn protocol(a: ProtocolArgs) -> Result<i32> {
    let started = Instant::now();
    let limits = limits(&a.common)?;
    let m = read_matrix(&a.matrix)?;
    let finder = mono_finder(a.strategy, parse_k(a.big_k.as_deref())?, a.common.seed);
    let mut report = Report::new(
        "protocol",
        a.common.seed,
        config(
            json!({ "matrix": a.matrix, "strategy": a.strategy, "K": a.big_k, "tree": a.tree }),
            &a.common,
        ),
    );
    let tree = match build_protocol(&m, &finder, &limits, None) {
        Ok(t) => t,
        Err(e) if e.class() == logrank_core::ErrorClass::Usage => return Err(e),
        Err(e) => {
            report.fail(&e);
            return finish(report, &a.common, started);
        }
    };
    if let Some(path) = &a.tree {
        emit(&tree.to_json(), Some(path))?;
    }
    record_cost(&mut report, &tree, &m);
    finish(report, &a.common, started)
}

fn record_cost(report: &mut Report, tree: &ProtocolTree, m: &BoolMatrix) {
    match verify(tree, m) {
        Ok(cost) => {
            report.assert(Assertion::new("simulation-matches-matrix", true));
            report.assert(Assertion::new("leaves-cover-rank", cost.leaves_cover_rank));
            report.rows.push(row! {
                "rows" => m.rows(),
                "cols" => m.cols(),
                "rank_real" => cost.rank_real,
                "leaves" => cost.leaves,
                "depth" => cost.depth,
                "internal_nodes" => cost.internal_nodes,
                "max_bits" => cost.max_bits,
                "fallbacks" => tree.stats.fallbacks,
            });
            report.result = json!({ "cost": cost, "stats": tree.stats });
        }
        Err(e) => {
            report.assert(
                Assertion::new("simulation-matches-matrix", false).with_detail(e.to_string()),
            );
            report.fail(&e);
        }
    }
}

fn verify_cmd(a: VerifyArgs) -> Result<i32> {
    let started = Instant::now();
    let tree = ProtocolTree::from_json(&read_text(&a.tree)?)?;
    let m = read_matrix(&a.matrix)?;
    let mut report = Report::new(
        "verify",
        a.common.seed,
        config(json!({ "tree": a.tree, "matrix": a.matrix }), &a.common),
    );
    record_cost(&mut report, &tree, &m);
    finish(report, &a.common, started)
}

/// `{ y : <x, y> = 0 for all x in a }`, enumerated over `F_2^n`.
pub fn annihilator(a: &logrank_core::F2Set, limits: &Limits) -> Result<logrank_core::F2Set> {
    let n = a.dim();
    if n > limits.dense_cap || n >= MAX_DIM {
        return Err(Error::CapExceeded {
            what: "dimension",
            value: n,
            cap: limits.dense_cap,
        });
    }
    logrank_core::F2Set::from_words(
        n,
        (0..1u64 << n).filter(|&y| a.words().iter().all(|&x| parity(x & y) == 0)),
    )
}
