use std::path::{Path, PathBuf};
use std::process::Command;

use logrank_cli::report::{parse_csv, Report, Status};
use logrank_core::boolmatrix::format::parse_matrix;
use logrank_core::f2core::format::parse_set;
use logrank_core::ProtocolTree;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_logrank"))
}

fn run(args: &[&str]) -> i32 {
    bin()
        .args(args)
        .status()
        .expect("spawn logrank")
        .code()
        .expect("exit code")
}

fn out(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_matrix_is_seeded_and_parses() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (
        out(dir.path(), "a"),
        out(dir.path(), "b"),
        out(dir.path(), "c"),
    );
    let base = [
        "gen-matrix",
        "random-f2-rank",
        "--k",
        "8",
        "--l",
        "8",
        "--rank",
        "3",
    ];
    assert_eq!(
        run(&[&base[..], &["--seed", "7", "--out", s(&a)]].concat()),
        0
    );
    assert_eq!(
        run(&[&base[..], &["--seed", "7", "--out", s(&b)]].concat()),
        0
    );
    assert_eq!(
        run(&[&base[..], &["--seed", "8", "--out", s(&c)]].concat()),
        0
    );
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    assert_ne!(ta, std::fs::read(&c).unwrap());
    let m = parse_matrix(&String::from_utf8(ta).unwrap()).unwrap();
    assert_eq!(logrank_core::boolmatrix::rank_f2(&m), 3);
}

#[test]
fn weight_slice_file_has_binomial_size() {
    let dir = tempfile::tempdir().unwrap();
    let p = out(dir.path(), "s");
    assert_eq!(
        run(&[
            "gen-sets",
            "weight-slice",
            "--n",
            "8",
            "--w",
            "2",
            "--out",
            s(&p)
        ]),
        0
    );
    let set = parse_set(&std::fs::read_to_string(&p).unwrap(), 24).unwrap();
    assert_eq!(set.len(), 28);
    assert_eq!(set.dim(), 8);
}

#[test]
fn from_sets_matrix_is_inner_products() {
    let dir = tempfile::tempdir().unwrap();
    let (sa, m) = (out(dir.path(), "a"), out(dir.path(), "m"));
    assert_eq!(
        run(&[
            "gen-sets",
            "weight-slice",
            "--n",
            "5",
            "--w",
            "2",
            "--out",
            s(&sa)
        ]),
        0
    );
    assert_eq!(
        run(&[
            "gen-matrix",
            "from-sets",
            "--a",
            s(&sa),
            "--b",
            s(&sa),
            "--out",
            s(&m)
        ]),
        0
    );
    let set = parse_set(&std::fs::read_to_string(&sa).unwrap(), 24).unwrap();
    let m = parse_matrix(&std::fs::read_to_string(&m).unwrap()).unwrap();
    let w = set.words();
    for i in 0..w.len() {
        for j in 0..w.len() {
            assert_eq!(m.entry(i, j) as u32, (w[i] & w[j]).count_ones() % 2);
        }
    }
}

#[test]
fn protocol_tree_file_verifies_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (m, t, r1, r2) = (
        out(dir.path(), "m"),
        out(dir.path(), "t.json"),
        out(dir.path(), "r1.json"),
        out(dir.path(), "r2.json"),
    );
    let gen = [
        "gen-matrix",
        "random-real-rank",
        "--k",
        "9",
        "--l",
        "11",
        "--rank",
        "3",
        "--seed",
        "5",
    ];
    assert_eq!(run(&[&gen[..], &["--out", s(&m)]].concat()), 0);
    for strategy in ["exact", "greedy", "via-dual"] {
        assert_eq!(
            run(&[
                "protocol",
                s(&m),
                "--strategy",
                strategy,
                "--tree",
                s(&t),
                "--out",
                s(&r1)
            ]),
            0
        );
        let text = std::fs::read_to_string(&t).unwrap();
        let tree = ProtocolTree::from_json(&text).unwrap();
        assert_eq!(tree.to_json(), text);
        assert_eq!(run(&["verify", s(&t), s(&m), "--out", s(&r2)]), 0);
        let built = Report::from_json(&std::fs::read_to_string(&r1).unwrap()).unwrap();
        let checked = Report::from_json(&std::fs::read_to_string(&r2).unwrap()).unwrap();
        assert_eq!(built.rows, checked.rows);
        assert!(checked.assertions.iter().all(|a| a.passed));
    }
}

#[test]
fn tampered_tree_exits_with_invariant_code() {
    let dir = tempfile::tempdir().unwrap();
    let (m, t) = (out(dir.path(), "m"), out(dir.path(), "t.json"));
    assert_eq!(run(&["gen-matrix", "ip", "--n", "2", "--out", s(&m)]), 0);
    assert_eq!(
        run(&[
            "protocol",
            s(&m),
            "--tree",
            s(&t),
            "--out",
            s(&out(dir.path(), "r"))
        ]),
        0
    );
    let text = std::fs::read_to_string(&t).unwrap();
    let flipped = if text.contains("\"output\": 0") {
        text.replacen("\"output\": 0", "\"output\": 1", 1)
    } else {
        text.replacen("\"output\": 1", "\"output\": 0", 1)
    };
    std::fs::write(&t, flipped).unwrap();
    let r = out(dir.path(), "v.json");
    assert_eq!(run(&["verify", s(&t), s(&m), "--out", s(&r)]), 3);
    let report = Report::from_json(&std::fs::read_to_string(&r).unwrap()).unwrap();
    assert_eq!(report.status, Status::InvariantViolation);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["no-such-verb"]), 1);
    assert_eq!(
        run(&[
            "gen-matrix",
            "random-f2-rank",
            "--k",
            "3",
            "--l",
            "3",
            "--rank",
            "5"
        ]),
        1
    );
    assert_eq!(run(&["gen-matrix", "ip"]), 1);
    assert_eq!(run(&["analyze", "/nonexistent/matrix.txt"]), 1);
    assert_eq!(
        run(&["experiment", "counterexample", "--exact-cap", "65"]),
        1
    );
    assert_eq!(run(&["--help"]), 0);
}

#[test]
fn zero_duality_is_not_found() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, r) = (
        out(dir.path(), "a"),
        out(dir.path(), "b"),
        out(dir.path(), "r"),
    );
    // A = {00, 01}, B = {01, 11}: the characters cancel, so D = 0
    std::fs::write(&a, "# dim 2\n00\n01\n").unwrap();
    std::fs::write(&b, "# dim 2\n01\n11\n").unwrap();
    let code = run(&["dual", s(&a), s(&b), "--out", s(&r)]);
    let report = Report::from_json(&std::fs::read_to_string(&r).unwrap()).unwrap();
    assert_eq!(report.rows[0]["d"], "0");
    assert_eq!(code, 2);
    assert_eq!(report.status, Status::NotFound);
}

#[test]
fn every_dual_strategy_reports_a_pair_for_a_subspace() {
    let dir = tempfile::tempdir().unwrap();
    let (a, r) = (out(dir.path(), "a"), out(dir.path(), "r"));
    assert_eq!(
        run(&[
            "gen-sets",
            "subspace",
            "--n",
            "6",
            "--d",
            "3",
            "--seed",
            "2",
            "--out",
            s(&a)
        ]),
        0
    );
    for strategy in ["pipeline", "exact", "greedy"] {
        assert_eq!(
            run(&[
                "dual",
                s(&a),
                s(&a),
                "--strategy",
                strategy,
                "--format",
                "csv",
                "--out",
                s(&r)
            ]),
            0
        );
        let rows = parse_csv(&std::fs::read_to_string(&r).unwrap()).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        let (pa, pb): (usize, usize) = (
            row["pair_a"].parse().unwrap(),
            row["pair_b"].parse().unwrap(),
        );
        assert_eq!(row["area"], (pa * pb).to_string());
        assert!(pa >= 1 && pb >= 1);
    }
}

#[test]
fn timings_only_when_requested() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (out(dir.path(), "a"), out(dir.path(), "b"));
    assert_eq!(run(&["experiment", "doubling", "--out", s(&a)]), 0);
    assert_eq!(
        run(&["experiment", "doubling", "--timings", "--out", s(&b)]),
        0
    );
    let plain = Report::from_json(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let timed = Report::from_json(&std::fs::read_to_string(&b).unwrap()).unwrap();
    assert!(plain.timings_ms.is_none());
    assert!(timed.timings_ms.unwrap().contains_key("total"));
    assert_eq!(plain.rows, timed.rows);
}

#[test]
fn experiment_csv_has_one_row_per_instance() {
    let dir = tempfile::tempdir().unwrap();
    let p = out(dir.path(), "sweep.csv");
    let code = run(&[
        "experiment",
        "log-rank-sweep",
        "--rank",
        "4",
        "--instances",
        "5",
        "--k",
        "10",
        "--l",
        "10",
        "--format",
        "csv",
        "--out",
        s(&p),
    ]);
    assert_eq!(code, 0);
    let rows = parse_csv(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(rows.len(), 15);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r["instance"], i.to_string());
    }
}
