//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain
//! binary (no libtest harness) so the lines always reach stdout; exits
//! nonzero when any criterion fails.

use std::path::Path;
use std::time::{Duration, Instant};

use logrank_cli::report::{parse_csv, Report};
use logrank_core::adcomb::BsgParams;
use logrank_core::approxdual::{exact_dual_oracle, find_dual_pair, DualPair, SequenceState};
use logrank_core::boolmatrix::format::{parse_matrix, write_matrix};
use logrank_core::boolmatrix::{
    dedup, factorize_f2, find_biased_submatrix, max_mono_exact, rank_f2, rank_real, BoolMatrix,
    SubmatrixView,
};
use logrank_core::f2core::format::{parse_set, write_set};
use logrank_core::f2core::{duality_measure, F2Set};
use logrank_core::generators::{
    from_sets, ip_matrix, random_dense, random_real_rank, random_set, subspace,
    subspace_plus_noise, weight_slice,
};
use logrank_core::protocol::{build_protocol, verify};
use logrank_core::rational::{ratio, to_f64};
use logrank_core::{Limits, MonoFinder, ProtocolNode, ProtocolTree, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    summary: String,
}

fn outcome(passed: bool, summary: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        summary: summary.into(),
    }
}

fn parity(x: u64) -> i64 {
    (x.count_ones() & 1) as i64
}

fn chi(x: u64) -> i64 {
    1 - 2 * parity(x)
}

/// Direct `sum_{a, b} (-1)^{<a,b>}`.
fn direct_sum(a: &[u64], b: &[u64]) -> i64 {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| chi(x & y)))
        .sum()
}

fn direct_duality(a: &[u64], b: &[u64]) -> Rational {
    ratio(direct_sum(a, b).abs(), (a.len() * b.len()) as u64)
}

fn pair_is_monochromatic(p: &DualPair) -> bool {
    let bit = |x: u64, y: u64| parity(x & y) as u8;
    p.a.words()
        .iter()
        .all(|&x| p.b.words().iter().all(|&y| bit(x, y) == p.constant_bit))
}

// 1: exact ranks of the inner-product matrix
fn ip_anchors() -> Outcome {
    let mut bad = Vec::new();
    for n in 2..=5usize {
        let m = ip_matrix(n).unwrap();
        let (f2, real) = (rank_f2(&m), rank_real(&m));
        if f2 != n || real != (1 << n) - 1 {
            bad.push(format!("n={n}: rank_f2={f2} rank_real={real}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!("n = 2..5, rank_f2 = n and rank_real = 2^n - 1; mismatches {bad:?}"),
    )
}

// 2: rectangles of a deduplicated matrix are dual pairs of its factor sets
fn bridge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb41d6e);
    let (mut instances, mut area_bad, mut delta_checks, mut delta_bad) = (0, 0, 0, 0);
    while instances < 500 {
        let (k, l) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let p = rng.gen_range(0.1..0.9);
        let m = dedup(&random_dense(k, l, p, &mut rng).unwrap()).matrix;
        instances += 1;
        let fac = factorize_f2(&m).unwrap();
        let rect = max_mono_exact(&m, 20).unwrap();
        let pair = exact_dual_oracle(&fac.a, &fac.b, 20).unwrap();
        if rect.area() != pair.area() {
            area_bad += 1;
        }
        for _ in 0..100 {
            let mut rows: Vec<usize> = (0..m.rows()).filter(|_| rng.gen_bool(0.5)).collect();
            let mut cols: Vec<usize> = (0..m.cols()).filter(|_| rng.gen_bool(0.5)).collect();
            if rows.is_empty() {
                rows.push(rng.gen_range(0..m.rows()));
            }
            if cols.is_empty() {
                cols.push(rng.gen_range(0..m.cols()));
            }
            let view = SubmatrixView::new(rows, cols);
            let a: Vec<u64> = view.rows.iter().map(|&i| fac.row_vectors[i]).collect();
            let b: Vec<u64> = view.cols.iter().map(|&j| fac.col_vectors[j]).collect();
            delta_checks += 1;
            if view.discrepancy(&m).unwrap() != direct_duality(&a, &b) {
                delta_bad += 1;
            }
        }
    }
    outcome(
        area_bad == 0 && delta_bad == 0,
        format!(
            "{instances} matrices: max-mono vs oracle area mismatches {area_bad}; \
             delta(view) vs D(A_I, B_J) mismatches {delta_bad}/{delta_checks}"
        ),
    )
}

// 3: Markov restriction to the spectrum and the pair-bias lower bound
fn spectral_steps() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc1a1);
    let (mut markov_bad, mut cs_bad, mut measure_bad, mut positive) = (0, 0, 0, 0);
    let total = 1000;
    for _ in 0..total {
        let n = rng.gen_range(1..=10usize);
        let cap = 1usize << n;
        let a = random_set(n, rng.gen_range(1..=cap.min(40)), &mut rng).unwrap();
        let b = random_set(n, rng.gen_range(1..=cap.min(40)), &mut rng).unwrap();
        let (aw, bw) = (a.words(), b.words());
        let d = direct_duality(aw, bw);
        if duality_measure(&a, &b).unwrap() != d {
            measure_bad += 1;
        }
        if d > ratio(0, 1) {
            positive += 1;
        }
        // |bias_B(x)| >= D/2  <=>  2 |sum_b chi| >= D |B|
        let half = &d / ratio(2, 1);
        let in_spec = aw
            .iter()
            .filter(|&&x| {
                let s: i64 = bw.iter().map(|&y| chi(x & y)).sum();
                ratio(s.abs(), bw.len() as u64) >= half
            })
            .count();
        if ratio(in_spec as u64, 1) < &half * ratio(aw.len() as u64, 1) {
            markov_bad += 1;
        }
        let pair_sum: i64 = aw
            .iter()
            .flat_map(|&x| aw.iter().map(move |&y| x ^ y))
            .map(|z| bw.iter().map(|&y| chi(z & y)).sum::<i64>().abs())
            .sum();
        let mean = ratio(pair_sum, (aw.len() * aw.len() * bw.len()) as u64);
        if mean < &d * &d {
            cs_bad += 1;
        }
    }
    outcome(
        markov_bad == 0 && cs_bad == 0 && measure_bad == 0,
        format!(
            "{total} pairs ({positive} with D > 0): spectrum-fraction violations {markov_bad}, \
             pair-bias violations {cs_bad}, D mismatches {measure_bad}"
        ),
    )
}

/// Smallest `t` with `K^t >= 2^n`, i.e. `ceil(n / log2 K)`.
fn stop_bound(n: usize, k: &Rational) -> usize {
    let target = ratio(1u128 << n, 1u64);
    (0..).find(|&t| k.pow(t as i32) >= target).unwrap()
}

/// Recomputes both bucket inequalities from the stored level sets.
fn levels_ok(s: &SequenceState) -> (bool, bool) {
    let n = s.dim as u64;
    let (mut hit_bound, mut size_bound) = (true, true);
    for w in s.levels.windows(2) {
        let (prev, cur) = (&w[0], &w[1]);
        let Some(j) = cur.bucket else {
            return (false, false);
        };
        let pw = prev.set.words();
        let hits = pw
            .iter()
            .flat_map(|&x| pw.iter().map(move |&y| x ^ y))
            .filter(|&z| cur.set.contains_word(z))
            .count();
        let frac = ratio(hits as u64, (pw.len() * pw.len()) as u64);
        hit_bound &= frac >= &cur.epsilon / ratio(n, 1);
        hit_bound &= cur.pair_fraction.as_ref() == Some(&frac);
        let rhs =
            &cur.epsilon * ratio((pw.len() * pw.len()) as u64, (1u128 << (j + 1)) * n as u128);
        size_bound &= ratio(cur.set.len() as u64, 1) >= rhs;
    }
    (hit_bound, size_bound)
}

fn annihilator(v: &F2Set) -> F2Set {
    let n = v.dim();
    F2Set::from_words(
        n,
        (0..1u64 << n).filter(|&y| v.words().iter().all(|&x| parity(x & y) == 0)),
    )
    .unwrap()
}

// 4: every pipeline pair is dual; every sequence meets its bounds
fn pipeline() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0a1);
    let limits = Limits::default();
    let total = 500;
    let (mut pairs, mut pair_bad, mut seqs, mut t_bad, mut hit_bad, mut size_bad, mut invariant) =
        (0, 0, 0, 0, 0, 0, 0);
    let mut not_found = 0;
    for i in 0..total {
        let n = rng.gen_range(2..=12usize);
        let cap = 1usize << n;
        let (a, b) = match i % 4 {
            0 => {
                let a = random_set(n, rng.gen_range(1..=cap.min(48)), &mut rng).unwrap();
                (
                    a,
                    random_set(n, rng.gen_range(1..=cap.min(48)), &mut rng).unwrap(),
                )
            }
            1 => {
                let d = rng.gen_range(1..n);
                let a =
                    subspace_plus_noise(n, d, rng.gen_range(0..=3.min(cap - (1 << d))), &mut rng)
                        .unwrap();
                (
                    a,
                    random_set(n, rng.gen_range(1..=cap.min(16)), &mut rng).unwrap(),
                )
            }
            2 => {
                let v = subspace(n, rng.gen_range(1..n), &mut rng).unwrap();
                let noisy = subspace_plus_noise(n, 0, rng.gen_range(0..=2), &mut rng).unwrap();
                (v.union(&noisy).unwrap(), annihilator(&v))
            }
            _ => {
                let w = rng.gen_range(1..=2.min(n - 1));
                (
                    weight_slice(n, w).unwrap(),
                    random_set(n, rng.gen_range(1..=cap.min(24)), &mut rng).unwrap(),
                )
            }
        };
        let bsg = BsgParams {
            seed: i as u64,
            ..BsgParams::default()
        };
        let trace = find_dual_pair(&a, &b, None, &limits, &bsg);
        if let Some(s) = &trace.sequence {
            seqs += 1;
            if s.t > stop_bound(s.dim, &s.k) {
                t_bad += 1;
            }
            let (e6, e7) = levels_ok(s);
            hit_bad += usize::from(!e6);
            size_bad += usize::from(!e7);
        }
        if let Some(f) = &trace.failure {
            if f.class == logrank_core::ErrorClass::Invariant {
                invariant += 1;
            } else {
                not_found += 1;
            }
        }
        if let Some(p) = &trace.pair {
            pairs += 1;
            let inside =
                p.a.is_subset(&a) && p.b.is_subset(&b) && !p.a.is_empty() && !p.b.is_empty();
            if !(inside && pair_is_monochromatic(p)) {
                pair_bad += 1;
            }
        }
    }
    outcome(
        pair_bad == 0 && t_bad == 0 && hit_bad == 0 && size_bad == 0 && invariant == 0,
        format!(
            "{total} instances, {pairs} pairs ({pair_bad} not dual), {seqs} sequences \
             (t-bound {t_bad}, hit-bound {hit_bad}, size-bound {size_bad} violations), invariant failures {invariant}, \
             legitimate not-found {not_found}"
        ),
    )
}

/// Walks the tree over the deduplicated matrix, recomputing each node's
/// rank and checking the block-rank inequality recorded there.
fn audit_node(
    node: &ProtocolNode,
    m: &BoolMatrix,
    rows: Vec<usize>,
    cols: Vec<usize>,
    bad: &mut Vec<String>,
) {
    let ProtocolNode::Internal {
        speaker,
        split,
        children,
        annotations: a,
    } = node
    else {
        return;
    };
    let sub = m
        .submatrix(&SubmatrixView::new(rows.clone(), cols.clone()))
        .unwrap();
    let r = rank_real(&sub);
    if a.rank != r {
        bad.push(format!("node rank {} recorded, {} recomputed", a.rank, r));
    }
    if a.rank_r + a.rank_s > r + 1 {
        bad.push(format!(
            "rank(R) + rank(S) = {} > {}",
            a.rank_r + a.rank_s,
            r + 1
        ));
    }
    let (side, other) = match speaker {
        logrank_core::protocol::Speaker::Row => (&rows, &cols),
        logrank_core::protocol::Speaker::Column => (&cols, &rows),
    };
    let inside: Vec<usize> = side
        .iter()
        .copied()
        .filter(|x| split.binary_search(x).is_ok())
        .collect();
    let outside: Vec<usize> = side
        .iter()
        .copied()
        .filter(|x| split.binary_search(x).is_err())
        .collect();
    for (child, part) in children.iter().zip([outside, inside]) {
        let (cr, cc) = match speaker {
            logrank_core::protocol::Speaker::Row => (part, other.clone()),
            logrank_core::protocol::Speaker::Column => (other.clone(), part),
        };
        audit_node(child, m, cr, cc, bad);
    }
}

// 5: protocols compute M, respect block ranks and have enough leaves
fn protocols() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9a07);
    let limits = Limits::default();
    let finders = [
        MonoFinder::Exact,
        MonoFinder::Greedy,
        MonoFinder::ViaDual {
            finder: Default::default(),
        },
    ];
    let (mut trees, mut mismatches, mut leaf_bad, mut errors) = (0, 0, 0, 0);
    let mut rank_bad: Vec<String> = Vec::new();
    for _ in 0..200 {
        let (k, l) = (rng.gen_range(1..=16), rng.gen_range(1..=16));
        let r = rng.gen_range(1..=6usize.min(k).min(l));
        let m = random_real_rank(k, l, r, &mut rng).unwrap();
        let rank = rank_real(&m);
        for finder in &finders {
            trees += 1;
            let tree = match build_protocol(&m, finder, &limits, None) {
                Ok(t) => t,
                Err(e) => {
                    errors += 1;
                    rank_bad.push(format!("{}: {e}", finder.name()));
                    continue;
                }
            };
            for x in 0..m.rows() {
                for y in 0..m.cols() {
                    if tree.simulate(x, y).map(|o| o.0).ok() != Some(m.entry(x, y)) {
                        mismatches += 1;
                    }
                }
            }
            if tree.stats.leaves + 1 < rank {
                leaf_bad += 1;
            }
            let d = dedup(&m).matrix;
            audit_node(
                &tree.root,
                &d,
                (0..d.rows()).collect(),
                (0..d.cols()).collect(),
                &mut rank_bad,
            );
            if verify(&tree, &m).is_err() {
                errors += 1;
            }
        }
    }
    rank_bad.truncate(3);
    outcome(
        mismatches == 0 && leaf_bad == 0 && errors == 0 && rank_bad.is_empty(),
        format!(
            "{trees} trees (200 matrices x 3 finders): simulate mismatches {mismatches}, \
             L < rank - 1 in {leaf_bad}, errors {errors}, node violations {rank_bad:?}"
        ),
    )
}

// 6: weight-2 slice, maximum dual pair against |A|^2 as n grows
fn counterexample() -> Outcome {
    let mut table = Vec::new();
    let mut ratios = Vec::new();
    let mut cross_bad = 0;
    let mut oracle_n10 = Duration::ZERO;
    for n in [6usize, 8, 10] {
        let a = weight_slice(n, 2).unwrap();
        let d = duality_measure(&a, &a).unwrap();
        let started = Instant::now();
        let pair = exact_dual_oracle(&a, &a, 64).unwrap();
        if n == 10 {
            oracle_n10 = started.elapsed();
        }
        let mono = max_mono_exact(&from_sets(&a, &a).unwrap(), 64).unwrap();
        if mono.area() != pair.area() || !pair_is_monochromatic(&pair) {
            cross_bad += 1;
        }
        let q = ratio(pair.area() as u64, (a.len() * a.len()) as u64);
        table.push(format!(
            "n={n} |A|={} D={} area={} ratio={} ({:.4})",
            a.len(),
            d,
            pair.area(),
            q,
            to_f64(&q)
        ));
        ratios.push(q);
    }
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    let fast = oracle_n10 < Duration::from_secs(120);
    outcome(
        decreasing && fast && cross_bad == 0,
        format!(
            "[{}]; strictly decreasing: {decreasing}; oracle vs max-mono disagreements {cross_bad}; \
             n=10 oracle {:.2}s",
            table.join("; "),
            oracle_n10.as_secs_f64()
        ),
    )
}

/// Whether any view meets both bounds, by enumerating row subsets and,
/// for each, the best column set of every size.
fn bias_view_exists(m: &BoolMatrix, r: usize) -> bool {
    let m = if m.rows() > m.cols() {
        m.transpose()
    } else {
        m.clone()
    };
    let r3 = (r.max(1) as u128).pow(3);
    let total = m.area() as u128;
    for mask in 1u32..1 << m.rows() {
        let rows: Vec<usize> = (0..m.rows()).filter(|&i| mask >> i & 1 == 1).collect();
        let h = rows.len() as i64;
        // per column: (#zeros - #ones) over the chosen rows
        let mut s: Vec<i64> = (0..m.cols())
            .map(|j| h - 2 * rows.iter().filter(|&&i| m.get(i, j)).count() as i64)
            .collect();
        for _sign in 0..2 {
            s.sort_unstable_by(|x, y| y.cmp(x));
            let mut acc = 0i64;
            for (w, v) in s.iter().enumerate() {
                acc += v;
                let area = (h as u128) * (w as u128 + 1);
                let imb = acc.max(0) as u128;
                if area * area * r3 >= total * total && imb * imb * r3 >= area * area {
                    return true;
                }
            }
            s.iter_mut().for_each(|v| *v = -*v);
        }
    }
    false
}

// 7: biased submatrix meeting both r^{-3/2} bounds
fn nw_contract() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4e57);
    let total = 100;
    let (mut found, mut bound_bad, mut not_found, mut disagree) = (0, 0, 0, 0);
    let mut infeasible_by_rank = [0usize; 6];
    for _ in 0..total {
        let (k, l) = (rng.gen_range(2..=12), rng.gen_range(2..=12));
        let r = rng.gen_range(1..=5usize.min(k).min(l));
        let m = random_real_rank(k, l, r, &mut rng).unwrap();
        let rank = rank_real(&m).max(1);
        let exists = bias_view_exists(&m, rank);
        match find_biased_submatrix(&m, 20) {
            Ok(v) => {
                found += 1;
                let rows = v.view.rows.len();
                let ones = v.view.count_ones(&m);
                let imb = (v.area as i64 - 2 * ones as i64).unsigned_abs() as u128;
                let (area, all, r3) = (v.area as u128, m.area() as u128, (rank as u128).pow(3));
                let area_ok =
                    area == (rows * v.view.cols.len()) as u128 && area * area * r3 >= all * all;
                if !(area_ok && imb * imb * r3 >= area * area) {
                    bound_bad += 1;
                }
                if !exists {
                    disagree += 1;
                }
            }
            Err(_) => {
                not_found += 1;
                if exists {
                    disagree += 1;
                } else {
                    infeasible_by_rank[rank] += 1;
                }
            }
        }
    }
    outcome(
        not_found == 0 && bound_bad == 0 && disagree == 0,
        format!(
            "{total} matrices: {found} views ({bound_bad} miss a bound), NotFound {not_found}, \
             exhaustive-search disagreements {disagree}; NotFound instances with no qualifying view \
             by rank 1..5: {:?}",
            &infeasible_by_rank[1..]
        ),
    )
}

fn cli(args: &[&str]) -> i32 {
    logrank_cli::main_with_args(std::iter::once("logrank").chain(args.iter().copied()))
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap()
}

// 8: byte-identical reruns and format round-trips
fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut differ = Vec::new();
    let experiments = [
        "dual-pipeline",
        "log-rank-sweep",
        "counterexample",
        "doubling",
        "nw-bias",
    ];
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    for name in experiments {
        for format in ["json", "csv"] {
            let a = dir.path().join(format!("{name}.a.{format}"));
            let b = dir.path().join(format!("{name}.b.{format}"));
            let args = |p: &Path| {
                vec![
                    "experiment",
                    name,
                    "--seed",
                    "11",
                    "--format",
                    format,
                    "--out",
                    p.to_str().unwrap(),
                ]
                .into_iter()
                .map(String::from)
                .collect::<Vec<_>>()
            };
            let args_a = args(&a);
            let args_b = args(&b);
            let ca = cli(&args_a.iter().map(String::as_str).collect::<Vec<_>>());
            let cb = serial.install(|| cli(&args_b.iter().map(String::as_str).collect::<Vec<_>>()));
            if ca != cb || read(&a) != read(&b) {
                differ.push(format!("{name}/{format}"));
            }
            if format == "json" {
                let text = String::from_utf8(read(&a)).unwrap();
                let r = Report::from_json(&text).unwrap();
                if r.to_json() != text {
                    differ.push(format!("{name}: report json round-trip"));
                }
            } else {
                let text = String::from_utf8(read(&a)).unwrap();
                let rows = parse_csv(&text).unwrap();
                if rows.is_empty() {
                    differ.push(format!("{name}: empty csv"));
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut round_trip_bad = 0;
    for _ in 0..50 {
        let (k, l) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
        let m = random_dense(k, l, 0.5, &mut rng).unwrap();
        round_trip_bad += usize::from(parse_matrix(&write_matrix(&m)).unwrap() != m);
        let n = rng.gen_range(1..=12usize);
        let s = random_set(n, rng.gen_range(0..=(1usize << n).min(30)), &mut rng).unwrap();
        round_trip_bad += usize::from(parse_set(&write_set(&s), 24).unwrap() != s);
        let tree = build_protocol(&m, &MonoFinder::Greedy, &Limits::default(), None).unwrap();
        round_trip_bad += usize::from(ProtocolTree::from_json(&tree.to_json()).unwrap() != tree);
    }
    outcome(
        differ.is_empty() && round_trip_bad == 0,
        format!(
            "{} experiments x json/csv, parallel vs single-thread reruns: differing {differ:?}; \
             matrix/set/tree round-trip failures {round_trip_bad}/150",
            experiments.len()
        ),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 8] = [
        ("IP anchors", ip_anchors, Duration::from_secs(1)),
        ("bridge equivalence", bridge, Duration::from_secs(30)),
        (
            "spectrum restriction and pair bias",
            spectral_steps,
            Duration::from_secs(60),
        ),
        ("pipeline soundness", pipeline, Duration::from_secs(300)),
        ("protocol correctness", protocols, Duration::from_secs(120)),
        (
            "counterexample ratio decreases",
            counterexample,
            Duration::from_secs(120),
        ),
        ("NW contract", nw_contract, Duration::from_secs(120)),
        (
            "determinism and round-trips",
            determinism,
            Duration::from_secs(30),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let o = run();
        let took = started.elapsed();
        let ok = o.passed && took <= *limit;
        failed += usize::from(!ok);
        println!(
            "{} criterion {} ({name}): {} [{:.2}s, limit {}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            o.summary,
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
