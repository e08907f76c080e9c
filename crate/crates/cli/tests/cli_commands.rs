use std::io::Write;
use std::process::{Command, Output};

fn qexp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qexp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn spec_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn table_examples() {
    let out = qexp(&["table", "bell", "--q", "2", "--n-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "n,value\n0,1\n1,1\n2,4\n3,57\n");

    let out = qexp(&["table", "projections", "--q", "2", "--n-max", "2"]);
    assert_eq!(stdout(&out), "n,value\n0,1\n1,2\n2,8\n");

    let out = qexp(&["table", "stirling-cycle", "--q", "2", "--n-max", "2"]);
    let text = stdout(&out);
    assert!(text.contains("2,1,5\n") && text.contains("2,2,1\n"), "{text}");
}

#[test]
fn csv_and_json_agree() {
    for seq in ["stirling-subset", "diagonalizable-by-k", "diagonalizations"] {
        let csv = stdout(&qexp(&["table", seq, "--q", "3", "--n-max", "6"]));
        let json = stdout(&qexp(&["table", seq, "--q", "3", "--n-max", "6", "--format", "json"]));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let mut from_json = Vec::new();
        for row in v["rows"].as_array().unwrap() {
            let cells: Vec<&str> = ["n", "k", "value"]
                .iter()
                .filter_map(|key| row.get(*key).map(|c| c.as_str().expect("decimal string")))
                .collect();
            from_json.push(cells.join(","));
        }
        let from_csv: Vec<&str> = csv.lines().skip(1).collect();
        assert_eq!(from_csv, from_json, "{seq}");
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["table", "bell", "--q", "1", "--n-max", "3"],
        vec!["table", "bell", "--q", "2", "--n-max", "25"],
        vec!["table", "bell", "--q", "2", "--n-max", "3", "--include-t"],
        vec!["table", "nonsense", "--q", "2", "--n-max", "3"],
        vec!["verify", "--level", "medium"],
    ] {
        assert_eq!(qexp(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn non_prime_power_warns() {
    let out = qexp(&["table", "bell", "--q", "6", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a prime power"));
}

#[test]
fn family_examples() {
    let f = spec_file(r#"{"q":2,"decks":{"1":1}}"#);
    let out = qexp(&["family", f.path().to_str().unwrap(), "--order", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("2,2,3\n"));

    let f = spec_file(r#"{"q":2,"decks":{"1":2}}"#);
    let out = qexp(&["family", f.path().to_str().unwrap(), "--order", "3"]);
    assert!(stdout(&out).contains("2,2,12\n"));

    let f = spec_file(r#"{"q":2,"decks":{}}"#);
    let out = qexp(&["family", f.path().to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for row in v["rows"].as_array().unwrap() {
        let origin = row["n"] == "0" && row["k"] == "0";
        assert_eq!(row["value"], if origin { "1" } else { "0" });
    }
}

#[test]
fn family_failures() {
    let bad = spec_file(r#"{"q":2,"decks":{"one":1}}"#);
    assert_eq!(qexp(&["family", bad.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(qexp(&["family", "/nonexistent/spec.json"]).status.code(), Some(2));

    let good = spec_file(r#"{"q":3,"decks":{"1":2,"2":1}}"#);
    let out = qexp(&["family", good.path().to_str().unwrap(), "--perturb-gamma", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_quick_and_fault() {
    let out = qexp(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() > 50);
    assert!(!text.contains("FAIL"));

    let out = qexp(&["verify", "--perturb-gamma", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("first failure: "), "{text}");
}

#[test]
fn verify_ignores_worker_count() {
    let run = |workers: &str| {
        Command::new(env!("CARGO_BIN_EXE_qexp"))
            .args(["verify", "--level", "quick"])
            .env("QEXP_WORKERS", workers)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("6"));
}
