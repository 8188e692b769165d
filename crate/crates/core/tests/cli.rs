use std::path::Path;
use std::process::{Command, Output};

fn chowsec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chowsec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn dim_and_statement_exit_codes() {
    let o = chowsec(&["dim", "--n", "3", "--d", "3", "--s", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "dim=19 expected=19 CERTIFIED fills=yes");

    let o = chowsec(&["dim", "--n", "4", "--d", "2", "--s", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).trim(), "dim=13 expected=14 defective(evidence)");

    assert_eq!(
        chowsec(&["dim", "--n", "0", "--d", "3", "--s", "1"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(chowsec(&["bogus"]).status.code(), Some(64));

    let o = chowsec(&[
        "statement",
        "--n",
        "3",
        "--d",
        "2",
        "--s",
        "0",
        "--t",
        "0",
        "--u",
        "2",
        "--v",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "a=6 subabundant rank=6 TRUE");
}

#[test]
fn prove_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let cert_s = cert.to_str().unwrap();
    let o = chowsec(&[
        "prove",
        "--n",
        "4",
        "--d",
        "3",
        "--s",
        "2",
        "--max-direct-n",
        "3",
        "--out",
        cert_s,
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let o = chowsec(&["verify-cert", cert_s]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("VALID"));

    // corrupt the second child's statement
    let text = std::fs::read_to_string(&cert).unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();
    json["tree"]["children"][1]["statement"] = serde_json::json!([3, 2, 0, 0, 3, 0]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&json).unwrap()).unwrap();
    let o = chowsec(&["verify-cert", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("INVALID root/1:"), "{}", stdout(&o));

    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(
        chowsec(&["verify-cert", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        chowsec(&["verify-cert", missing.to_str().unwrap()])
            .status
            .code(),
        Some(64)
    );
}

#[test]
fn unprovable_statement_exits_two() {
    let o = chowsec(&["prove", "--n", "2", "--d", "2", "--s", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_and_csv_are_reproducible() {
    let args = [
        "conjecture",
        "--max-s",
        "4",
        "--format",
        "json",
        "--seed",
        "7",
    ];
    let a = chowsec(&args);
    let b = chowsec(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);
    assert_eq!(report["root_seed"], "7");

    let csv = chowsec(&["table", "--d", "2", "--max-n", "6", "--format", "csv"]);
    assert_eq!(csv.status.code(), Some(0));
    let text = stdout(&csv);
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,s,dim,expected,defective,status"));
    assert!(lines.any(|l| l == "4,2,13,14,yes,rank_agrees"));
    assert_eq!(
        csv.stdout,
        chowsec(&["table", "--d", "2", "--max-n", "6", "--format", "csv"]).stdout
    );
}

#[test]
fn chow_rank_table_and_explain() {
    let o = chowsec(&[
        "table",
        "--chow-rank",
        "--max-n",
        "3",
        "--max-d",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("3,3,2,certified"), "{text}");
    assert!(text.contains("2,2,2,closed_form"), "{text}");

    let o = chowsec(&["conjecture", "--max-s", "3", "--explain"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("applies s2 to n"));
    assert!(text.contains("s=3: 2 cases (5,3)i (4,4)ii"), "{text}");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dim.json");
    let o = chowsec(&[
        "dim",
        "--n",
        "2",
        "--d",
        "3",
        "--s",
        "1",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(Path::new(&path)).unwrap()).unwrap();
    assert_eq!(v["dim"], 6);
    assert!(v["seed"].is_string());
}
