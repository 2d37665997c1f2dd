use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_grassblow"))
        .args(args)
        .env("GRASSBLOW_THREADS", "2")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn enum_examples() {
    let out = run(&["enum", "--p", "2", "--n", "4"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["count"], 6);

    let out = run(&["enum", "--s", "2", "--p", "2", "--n", "4", "--k", "2"], None);
    assert_eq!(lines(&out)[0]["labels"], serde_json::json!([[4, 3]]));

    let out = run(&["enum", "--s", "2", "--p", "2", "--n", "4", "--k", "5"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "--suite", "lemma-em", "--s", "3", "--p", "3", "--n", "6", "--samples", "10"][..],
        &["verify", "--suite", "orbits", "--r", "2"],
        &["verify", "--suite", "diagram", "--p", "2", "--n", "4", "--samples", "100", "--seed", "7"],
        &["verify", "--suite", "retraction", "--s", "3", "--p", "2", "--n", "5", "--samples", "10"],
        &["verify", "--suite", "flow", "--s", "2", "--p", "2", "--n", "4", "--samples", "10"],
        &["verify", "--suite", "strata", "--s", "4", "--p", "3", "--n", "6", "--samples", "10"],
    ] {
        let out = run(args, None);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let recs = lines(&out);
        assert!(!recs.is_empty());
        assert!(recs.iter().all(|r| r["pass"] == true && r["anchor"].is_string()));
    }
}

#[test]
fn verify_usage_errors() {
    assert_eq!(run(&["verify", "--suite", "flow", "--p", "2", "--n", "4"], None).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "orbits", "--r", "9"], None).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "bogus"], None).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let args =
        ["verify", "--suite", "retraction", "--s", "3", "--p", "2", "--n", "5", "--samples", "20", "--seed", "5"];
    let a = run(&args, None);
    let b = run(&args, None);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = run(&seq, None);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);

    let f = ["flow", "--s", "3", "--p", "2", "--n", "5", "--random", "--seed", "3"];
    assert_eq!(run(&f, None).stdout, run(&f, None).stdout);
}

#[test]
fn report_file() {
    let path = std::env::temp_dir().join(format!("grassblow-report-{}.jsonl", std::process::id()));
    let out = run(&["verify", "--suite", "orbits", "--r", "1", "--output", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.lines().count() >= 2);
}

#[test]
fn flow_examples() {
    let out = run(&["flow", "--s", "2", "--p", "2", "--n", "4", "--random", "--seed", "1"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = &lines(&out)[0];
    assert_eq!(v["degree"], 2);
    assert_eq!(v["components"], serde_json::json!([0, 2]));
    assert_eq!(v["degenerate"], false);

    let out =
        run(&["flow", "--s", "2", "--p", "2", "--n", "4"], Some(r#"{"rows": [["1","0","0","0"],["0","0","1","0"]]}"#));
    assert_eq!(out.status.code(), Some(0));
    let v = &lines(&out)[0];
    assert_eq!(v["degenerate"], true);
    assert_eq!(v["fixed_component"], 1);

    assert_eq!(run(&["flow", "--s", "2", "--p", "2", "--n", "4"], Some("[[1,0,0],[0,0,1]]")).status.code(), Some(2));
    assert_eq!(run(&["flow", "--s", "2", "--p", "2", "--n", "4"], Some("not json")).status.code(), Some(2));
}
