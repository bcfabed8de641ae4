use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn sqfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqfree"))
        .args(args)
        .env_remove("SQFREE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn schema(name: &str) -> JSONSchema {
    let path = format!("{}/schema/{name}", env!("CARGO_MANIFEST_DIR"));
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::compile(&value).expect("schema compiles")
}

fn assert_valid(schema: &JSONSchema, value: &Value) {
    if let Err(errors) = schema.validate(value) {
        let msgs: Vec<String> = errors
            .map(|e| format!("{e} at {}", e.instance_path))
            .collect();
        panic!("schema violations: {msgs:#?}\n{value:#}");
    }
}

fn json_report(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = sqfree(&full);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let value: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_valid(&schema("report.schema.json"), &value);
    value
}

#[test]
fn orbits_golden_text() {
    let out = sqfree(&["orbits", "--s", "3,5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("o(s) = {1,4,6,9},{2,5,7},{3,8},{10}\n"));
    let out = sqfree(&["orbits", "--s", "3"]);
    assert!(stdout(&out).contains("o(s) = {1,4},{2,5},{3},{6}\n"));
}

#[test]
fn invalid_lengths_are_usage_errors() {
    let out = sqfree(&["orbits", "--s", "5,3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not strictly increasing"));

    let out = sqfree(&["--format", "json", "orbits", "--s", "5,3"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_valid(&schema("error.schema.json"), &err);
    assert_eq!(err["error"]["kind"], "usage");

    assert_eq!(sqfree(&["orbits"]).status.code(), Some(2));
    assert_eq!(
        sqfree(&["--format", "dot", "orbits", "--s", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn mina_reports() {
    let v = json_report(&["mina", "--s", "2,4,8"]);
    assert_eq!(
        v["result"]["predicted"],
        serde_json::json!({"kind": "finite", "value": 4})
    );
    assert_eq!(
        v["result"]["exact"],
        serde_json::json!({"kind": "finite", "value": 4})
    );
    assert_eq!(v["result"]["agree"], true);

    let v = json_report(&["mina", "--s", "2,3,5"]);
    assert_eq!(v["result"]["predicted"]["kind"], "infinite");
    assert_eq!(v["result"]["exact"]["kind"], "infinite");

    let v = json_report(&["mina", "--s", "1,2,5"]);
    assert_eq!(
        v["result"]["exact"],
        serde_json::json!({"kind": "finite", "value": 4})
    );

    let out = sqfree(&["mina", "--s", "2,4", "--k-max", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn graph_lists_exports_and_budgets() {
    let out = sqfree(&["graph", "--s", "3,5", "--l", "2", "--dead-ends"]);
    let text = stdout(&out);
    assert!(text.contains("  aabaaaabab\n") && text.contains("  bbabbbbaba\n"));

    let v = json_report(&[
        "graph",
        "--s",
        "2",
        "--l",
        "3",
        "--adjacency",
        "--dead-ends",
    ]);
    let adj = &v["result"]["adjacency"];
    assert_eq!(
        adj["vertices"].as_array().unwrap().len(),
        v["result"]["vertices"].as_u64().unwrap() as usize
    );
    assert_eq!(
        adj["arcs"].as_array().unwrap().len(),
        v["result"]["arcs"].as_u64().unwrap() as usize
    );

    let out = sqfree(&["--format", "dot", "graph", "--s", "1", "--l", "2"]);
    assert_eq!(stdout(&out), "digraph \"G(1) l=2\" {\n  \"ab\";\n  \"ba\";\n  \"ab\" -> \"ba\";\n  \"ba\" -> \"ab\";\n}\n");

    let out = sqfree(&["graph", "--s", "3,5", "--l", "2", "--vertex-cap", "100"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_sqfree"))
        .args(["--format", "json", "graph", "--s", "3,5", "--l", "2"])
        .env("SQFREE_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "budget");
}

fn has_square(w: &[u8], s: &[usize]) -> bool {
    s.iter()
        .any(|&i| (0..w.len()).any(|j| j + 2 * i <= w.len() && w[j..j + i] == w[j + i..j + 2 * i]))
}

#[test]
fn walks_stream_and_are_deterministic() {
    let args = [
        "walk", "--s", "1,2", "--l", "3", "--seed", "7", "--steps", "100",
    ];
    let first = sqfree(&args);
    let letters = stdout(&first);
    let letters = letters.trim_end();
    assert_eq!(letters.len(), 100);
    assert!(!has_square(letters.as_bytes(), &[1, 2]));
    assert_eq!(first.stdout, sqfree(&args).stdout);

    let out = sqfree(&[
        "--format", "json", "walk", "--s", "3,7", "--l", "2", "--seed", "42", "--steps", "2500",
    ]);
    assert!(out.status.success());
    let events = schema("walk-event.schema.json");
    let mut stream = String::new();
    let lines: Vec<Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    for e in &lines {
        assert_valid(&events, e);
        if e["event"] == "letters" {
            assert_eq!(e["offset"].as_u64().unwrap() as usize, stream.len());
            stream.push_str(e["letters"].as_str().unwrap());
        }
    }
    assert_eq!(lines.first().unwrap()["event"], "start");
    assert_eq!(lines.last().unwrap()["event"], "end");
    assert_eq!(stream.len(), 2500);
    assert!(!has_square(stream.as_bytes(), &[3, 7]));

    let out = sqfree(&[
        "--format", "json", "walk", "--s", "1,2", "--l", "2", "--steps", "10",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["message"], "empty core");
}

#[test]
fn simulate_reports() {
    let v = json_report(&[
        "simulate", "--s", "1,2", "--l", "2", "--steps", "100", "--trials", "5",
    ]);
    for t in v["result"]["trials"].as_array().unwrap() {
        assert_eq!(t["outcome"], "dead_end");
        assert!(t["step"].as_u64().unwrap() <= 4);
    }
    let v = json_report(&[
        "simulate",
        "--s",
        "1,3,5",
        "--l",
        "3",
        "--prefix",
        "cbacacbac",
        "--steps",
        "5",
    ]);
    assert_eq!(v["result"]["trials"][0]["step"], 10);
    assert_eq!(v["result"]["trials"][0]["word"], "cbacacbac");
    assert_eq!(
        sqfree(&["simulate", "--s", "1", "--l", "2", "--prefix", "aa", "--steps", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn reports_are_byte_identical_and_hashed() {
    let args = [
        "--format", "json", "simulate", "--s", "2,5", "--l", "2", "--seed", "3", "--steps", "50",
        "--trials", "4",
    ];
    let a = sqfree(&args);
    let b = sqfree(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let other = json_report(&[
        "simulate", "--s", "2,5", "--l", "2", "--seed", "4", "--steps", "50", "--trials", "4",
    ]);
    assert_ne!(v["config_hash"], other["config_hash"]);
    assert_eq!(v["config"]["seed"], 3);
}

#[test]
fn verify_small_grid() {
    let v = json_report(&[
        "--threads",
        "2",
        "verify",
        "--grid",
        "r<=2,i1<=5,l<=3",
        "--steps",
        "1000",
    ]);
    assert_eq!(v["result"]["passed"], true);
    let out = sqfree(&["verify", "--grid", "r<=2,i1<=5,l<=3", "--steps", "1000"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("all checks passed"));
    assert_eq!(sqfree(&["verify", "--grid", "q<=2"]).status.code(), Some(2));
}
