use std::io::Write;
use std::process::{Command, Output};

use destab_cli::report::{Report, Verdict};

const LINE: &str = r#"{"kind": "torus", "metadata": {"name": "line"}, "payload": {
    "dim": 1,
    "weights": [{"label": "p", "chi": [1]}, {"label": "m", "chi": [-1]}],
    "tau": [1],
    "support": [{"label": "p", "amp_sq": 1}]
}}"#;

const CHAIN_LATTICE: &str = r#"{"kind": "bundle", "payload": {
    "nodes": [
        {"label": "A", "rank": 1, "degree": 1, "contains_phi": false},
        {"label": "E", "rank": 2, "degree": 0, "contains_phi": false}
    ],
    "order": [["A", "E"]]
}}"#;

const VECTOR: &str = r#"{"kind": "vector", "payload": {"s": [1, 1, 2]}}"#;

const SPLIT_PAIR: &str = r#"{"kind": "pair", "payload": {
    "nodes": [
        {"label": "B", "rank": 1, "degree": -4, "contains_phi": true},
        {"label": "C", "rank": 1, "degree": 0},
        {"label": "E", "rank": 2, "degree": -4, "contains_phi": true}
    ],
    "order": [["B", "E"], ["C", "E"]],
    "tau": "1"
}}"#;

const KERNEL_TWO: &str = r#"{"kind": "hom", "payload": {"t": "1/2", "matrix": [[1, 1, 1]]}}"#;

const INJECTIVE_CHAIN: &str = r#"{"kind": "chain", "payload": {"t": [1, 1], "matrices": [[[1], [0]], [[1, 0], [0, 1]]]}}"#;

fn destab(args: &[&str], input: &str) -> Output {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(input.as_bytes()).unwrap();
    Command::new(env!("CARGO_BIN_EXE_destab"))
        .args(args)
        .arg("--input")
        .arg(file.path())
        .output()
        .unwrap()
}

fn json_report(command: &str, input: &str) -> Report {
    let out = destab(&[command, "--format", "json"], input);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn check_on_the_line() {
    let r = json_report("check", LINE);
    assert_eq!(r.verdict, Some(Verdict::Unstable));
    let o = r.optimal.unwrap();
    assert_eq!(o.ray, vec!["-1"]);
    assert_eq!((o.lambda_inf.sign, o.lambda_inf.square.as_str()), (-1, "1"));
    assert_eq!(o.float_approx, "-1");
    assert_eq!(r.metadata["name"], "line");
}

#[test]
fn bundle_hn_on_the_chain_lattice() {
    let r = json_report("bundle-hn", CHAIN_LATTICE);
    let f = r.filtration.unwrap();
    assert_eq!(f.hn_type, vec![[1, 1], [1, -1]]);
    assert_eq!(f.chain, vec!["A", "E"]);
    let o = r.optimal.unwrap();
    assert_eq!(o.ray, vec!["-1", "1"]);
    assert_eq!(o.lambda_inf.square, "2");
    assert_eq!(o.lambda_inf.sign, -1);
}

#[test]
fn class_of_a_repeated_vector() {
    let c = json_report("class", VECTOR).class.unwrap();
    assert_eq!(c.eigenvalues, vec!["1", "2"]);
    assert_eq!(c.flag, vec![2, 3]);
}

#[test]
fn text_format_is_the_default() {
    let out = destab(&["check"], LINE);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: unstable"), "{text}");
    assert!(text.contains("ray: [-1]"), "{text}");
}

#[test]
fn pair_with_quotient_of_larger_slope() {
    let r = json_report("pair-hn", SPLIT_PAIR);
    let f = r.filtration.unwrap();
    assert_eq!(f.chain, vec!["B", "E"]);
    assert_eq!(f.case.as_deref(), Some("a"));
    assert_eq!(f.m, Some(0));
    assert_eq!(f.eigenvalues.unwrap(), vec!["0", "1"]);
    assert_eq!(r.optimal.unwrap().lambda_inf.square, "1");
}

#[test]
fn hom_reports_the_kernel_projector() {
    let r = json_report("hom", KERNEL_TWO);
    let h = r.hom.unwrap();
    assert_eq!(h.kernel_dim, 2);
    let o = r.optimal.unwrap();
    assert_eq!(o.ray, vec!["-2", "1", "1", "1", "-2", "1", "1", "1", "-2"]);
    // t² · k = 1/4 · 2
    assert_eq!(o.lambda_inf.square, "1/2");
}

#[test]
fn injective_chain_is_semistable() {
    let r = json_report("chain", INJECTIVE_CHAIN);
    assert_eq!(r.verdict, Some(Verdict::Semistable));
    assert_eq!(r.chain.unwrap().ranks, vec![1, 2]);
}

#[test]
fn semistable_torus_reports_its_minimum() {
    let input = LINE.replace(r#""amp_sq": 1}]"#, r#""amp_sq": 1}, {"label": "m", "amp_sq": 0.5}]"#);
    let r = json_report("check", &input);
    assert_eq!(r.verdict, Some(Verdict::Semistable));
    assert!(r.optimal.is_none());
    assert!(r.minimum.is_some());
}

#[test]
fn strata_of_the_line() {
    let strata = json_report("strata", LINE).strata.unwrap();
    assert_eq!(strata.len(), 2);
    let total: usize = strata.iter().map(|s| s.supports.len()).sum();
    assert_eq!(total, 4);
    assert_eq!(strata[0].verdict, Verdict::Semistable);
}

#[test]
fn verify_passes_on_every_example() {
    let cases = [
        ("check", LINE),
        ("destab", LINE),
        ("limit", LINE),
        ("strata", LINE),
        ("hom", KERNEL_TWO),
        ("chain", INJECTIVE_CHAIN),
        ("bundle-hn", CHAIN_LATTICE),
        ("pair-hn", SPLIT_PAIR),
    ];
    for (command, input) in cases {
        let out = destab(&[command, "--verify", "--seed", "7", "--format", "json"], input);
        assert_eq!(out.status.code(), Some(0), "{command}: {}", stderr(&out));
        let r: Report = serde_json::from_slice(&out.stdout).unwrap();
        assert!(!r.verification.is_empty(), "{command}");
        assert!(r.verification.iter().all(|c| c.passed), "{command}: {:?}", r.verification);
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for format in ["text", "json"] {
        for (command, input) in [("limit", LINE), ("pair-hn", SPLIT_PAIR), ("hom", KERNEL_TWO)] {
            let a = destab(&[command, "--format", format, "--verify"], input);
            let b = destab(&[command, "--format", format, "--verify"], input);
            assert_eq!(a.status.code(), Some(0));
            assert_eq!(a.stdout, b.stdout, "{command} {format}");
        }
    }
}

#[test]
fn json_round_trip() {
    for (command, input) in [
        ("destab", LINE),
        ("limit", LINE),
        ("strata", LINE),
        ("bundle-hn", CHAIN_LATTICE),
        ("pair-hn", SPLIT_PAIR),
        ("hom", KERNEL_TWO),
        ("chain", INJECTIVE_CHAIN),
        ("class", VECTOR),
    ] {
        let out = destab(&[command, "--format", "json", "--verify"], input);
        let report: Report = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report.to_json().as_bytes(), out.stdout.as_slice(), "{command}");
        let again: Report = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(again, report);
    }
}

#[test]
fn malformed_json_exits_2_with_a_path() {
    let out = destab(&["check"], r#"{"kind": "torus", "payload": {"dim": 1, "weights": [{"label": "p", "chi": ["1/0"]}], "tau": [1]}}"#);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("payload.weights[0].chi[0]"), "{err}");
    assert!(out.stdout.is_empty());

    let out = destab(&["check"], "{not json");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr(&out).lines().count(), 1);
}

#[test]
fn wrong_kind_exits_2() {
    let out = destab(&["bundle-hn"], VECTOR);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("kind"));
}

#[test]
fn semantic_errors_exit_2() {
    // μ(E) = −2 > τ = −3 violates the topological condition.
    let input = SPLIT_PAIR.replace(r#""tau": "1""#, r#""tau": -3"#);
    let out = destab(&["pair-hn"], &input);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("payload.tau"));

    let cyclic = r#"{"kind": "bundle", "payload": {"nodes": [
        {"label": "A", "rank": 1, "degree": 0}, {"label": "B", "rank": 1, "degree": 0},
        {"label": "E", "rank": 2, "degree": 0}], "order": [["A", "B"], ["B", "A"]]}}"#;
    assert_eq!(destab(&["bundle-hn"], cyclic).status.code(), Some(2));

    let unknown = LINE.replace(r#"{"label": "p", "amp_sq": 1}"#, r#"{"label": "q", "amp_sq": 1}"#);
    assert_eq!(destab(&["check"], &unknown).status.code(), Some(2));
}

#[test]
fn capacity_errors_exit_3() {
    let weights: Vec<String> = (1..=17).map(|i| format!(r#"{{"label": "w{i}", "chi": [{i}]}}"#)).collect();
    let input = format!(r#"{{"kind": "torus", "payload": {{"dim": 1, "weights": [{}], "tau": [1]}}}}"#, weights.join(","));
    let out = destab(&["strata"], &input);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("capacity"));
}

#[test]
fn missing_input_file_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_destab"))
        .args(["check", "--input", "/nonexistent/problem.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_reads_from_the_library_entry_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("vec.json");
    std::fs::write(&path, VECTOR).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = destab_cli::run(["destab", "class", "--input", path.to_str().unwrap()], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), "command: class\neigenvalues: [1, 2]\nflag: [2, 3]\n");
    assert!(err.is_empty());
}
