use std::io::Write as _;
use std::process::{Command, Output};

use finitude::extend::builtin_algebra;
use finitude::field::Q;
use finitude::finiteness::{mn_graphspec, validate_criterion_input, Criterion3Input};
use finitude::presentation::AlgebraRef;
use finitude::render::dot_counts;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finitude")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

const TWO_VERTEX_SB: &str = "\
field: Q
vertices: 1 2
arrow alpha: 1 -> 2
arrow beta: 1 -> 2
arrow gamma: 2 -> 1
rel: gamma.alpha
rel: alpha.gamma
rel: beta.gamma.beta
";

#[test]
fn validate_reads_a_presentation_file() {
    let f = temp_file(TWO_VERTEX_SB);
    let out = run(&["algebra", "validate", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("special biserial true"), "{}", stdout(&out));
}

#[test]
fn malformed_module_file_exits_2() {
    let f = temp_file("{\"dims\": [1, 0], \"arrows\": ");
    let out = run(&["module", "pdim", "ex2", "--module", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_exits_2() {
    assert_eq!(run(&["projectives", "ex2", "--no-such-flag"]).status.code(), Some(2));
}

#[test]
fn two_module_sources_is_a_usage_error() {
    assert_eq!(run(&["module", "pdim", "ex6", "--simple", "3", "--projective", "1"]).status.code(), Some(2));
}

#[test]
fn json_report_has_the_envelope_fields() {
    let out = run(&["module", "pdim", "ex6", "--simple", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "module pdim");
    assert_eq!(v["results"]["kind"], "infinite");
    assert_eq!(v["algebra_hash"].as_str().map(str::len), Some(64));
    assert!(v["wall_time"].is_f64());
    assert_eq!(v["parameters"]["field"], "Q");
}

#[test]
fn refutation_over_q_is_refused() {
    let out = run(&["criterion3", "refute", "ex6", "--p", "beta,chi", "--q", "alpha,psi"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn refutation_over_f2_refutes_example6() {
    let out = run(&["criterion3", "refute", "ex6", "--field", "F2", "--p", "beta,chi", "--q", "alpha,psi", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["results"]["refuted"], true);
}

#[test]
fn reproduce_example2_and_example6_pass() {
    for ex in ["example2", "example6"] {
        let out = run(&["reproduce", ex]);
        assert_eq!(out.status.code(), Some(0), "{ex}: {}", stdout(&out));
        assert!(!stdout(&out).contains("FAIL"));
    }
}

// The proposed approximations of S_5..S_8 miss maps from H_2 or H_3, so this run reports failures.
#[test]
fn reproduce_example7_reports_the_failing_approximations() {
    let out = run(&["reproduce", "example7", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let failed: Vec<&str> = v["results"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["claim"].as_str().unwrap())
        .collect();
    assert_eq!(failed.len(), 4, "{failed:?}");
    assert!(failed.iter().all(|c| ["S_5", "S_6", "S_7", "S_8"].iter().any(|s| c.ends_with(&format!("{s} is a right approximation")))));
}

#[test]
fn m2_graph_renders_with_four_tops_and_seven_edges() {
    let alg: AlgebraRef<Q> = builtin_algebra("ex6").unwrap();
    let inp = Criterion3Input { p: vec!["beta".into(), "chi".into()], q: vec!["alpha".into(), "psi".into()] };
    let (resolved, _) = validate_criterion_input(&alg, &inp).unwrap();
    let spec = mn_graphspec(&alg, &resolved, 2);
    let f = temp_file(&serde_json::to_string(&spec).unwrap());
    let out = run(&["module", "graph", "ex6", "--graph", f.path().to_str().unwrap(), "--dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = stdout(&out);
    let tops = dot.lines().filter(|l| l.trim_start().starts_with("\"top:") && !l.contains("->")).count();
    let (nodes, edges, _) = dot_counts(&dot);
    assert_eq!(tops, 4);
    assert_eq!(nodes - tops, 4);
    assert_eq!(edges, 7);
}

#[test]
fn extend_writes_a_loadable_presentation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l1.alg");
    let out = run(&[
        "extend",
        "ex7-lambda",
        "--spec",
        "extend: vertex 9; arrow chi1: 9 -> 5; arrow chi2: 9 -> 6; rel: beta1.chi1 - beta2.chi2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["projectives", path.to_str().unwrap()]);
    assert!(stdout(&out).contains("P(9): dim 5"), "{}", stdout(&out));
}
