use std::fs;
use std::process::{Command, Output};

fn ckrg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ckrg"))
        .args(args)
        .output()
        .expect("spawn ckrg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn trees_listing_and_counts() {
    let o = ckrg(&["trees", "--max-degree", "3", "--output", "pretty"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[]\n[[]]\n[[][]]\n[[[]]]\n1: 1\n2: 1\n3: 2\n");

    let o = ckrg(&["trees", "--max-degree", "1", "--output", "pretty"]);
    assert_eq!(stdout(&o), "[]\n1: 1\n");

    let o = ckrg(&["trees", "--max-degree", "6", "--output", "pretty"]);
    assert!(stdout(&o).lines().any(|l| l == "6: 20"));

    let o = ckrg(&["trees", "--max-degree", "4"]);
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json[3]["count"], 4);
}

#[test]
fn decompose_rows() {
    let o = ckrg(&["decompose", "--max-degree", "1", "--output", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rows = text.lines();
    assert_eq!(
        rows.next(),
        Some("tree,phi,phi_minus,phi_plus,phi_plus_expanded")
    );
    assert_eq!(rows.next(), Some("1,1,1,1,1"));
    let first = rows.next().unwrap();
    assert!(first.starts_with("[],g*E*eps^-1,-g*eps^-1,"), "{first}");

    let o = ckrg(&["decompose", "--max-degree", "0", "--output", "csv"]);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn decompose_custom_rule() {
    let dir = tempfile::tempdir().unwrap();
    let rule = dir.path().join("halved.rule");
    // Ladder values scaled by 2^-n.
    fs::write(
        &rule,
        "# halved ladder\n[]: { \"-1\": 1/2 }\n[[]]: { \"-2\": 1/8 }\n",
    )
    .unwrap();
    let o = ckrg(&[
        "decompose",
        "--max-degree",
        "2",
        "--rule",
        rule.to_str().unwrap(),
        "--output",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[],1/2*g*E*eps^-1,-1/2*g*eps^-1,"));

    let o = ckrg(&[
        "verify",
        "--max-degree",
        "2",
        "--rule",
        rule.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_exit_codes() {
    let o = ckrg(&["verify", "--max-degree", "4"]);
    assert_eq!(o.status.code(), Some(0));

    let o = ckrg(&["verify", "--suite", "hopf,nonsense"]);
    assert_eq!(o.status.code(), Some(2));

    let o = ckrg(&["verify", "--max-degree", "5", "--eps-trunc", "4"]);
    assert_eq!(o.status.code(), Some(2));

    let o = ckrg(&["verify", "--hierarchy-depth", "0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = ckrg(&["verify", "--rule", "/nonexistent/rule"]);
    assert_eq!(o.status.code(), Some(2));

    let o = ckrg(&["verify", "--suite", ""]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn non_local_rule_fails_with_locality_witness() {
    let dir = tempfile::tempdir().unwrap();
    let rule = dir.path().join("drift.rule");
    fs::write(&rule, "[]: { \"-1\": 1*t }\n[[]]: { \"-2\": 1/2 }\n").unwrap();
    let o = ckrg(&[
        "verify",
        "--suite",
        "birkhoff",
        "--max-degree",
        "2",
        "--rule",
        rule.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let reports = json["suites"][0]["reports"].as_array().unwrap();
    let locality = reports
        .iter()
        .find(|r| r["identity"] == "locality")
        .unwrap();
    assert_eq!(locality["pass"], false);
    assert_eq!(locality["witnesses"][0]["tree"], "[]");
}

#[test]
fn incomplete_or_malformed_rule_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let rule = dir.path().join("short.rule");
    fs::write(&rule, "[]: { \"-1\": 1 }\n").unwrap();
    let o = ckrg(&[
        "verify",
        "--max-degree",
        "2",
        "--rule",
        rule.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));

    fs::write(&rule, "[]: { \"x\": 1 }\n").unwrap();
    let o = ckrg(&["decompose", "--rule", rule.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn report_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ckrg(&["report", "--max-degree", "2", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let beta = fs::read_to_string(dir.path().join("beta.csv")).unwrap();
    assert_eq!(beta, "tree,degree,beta\n[],1,g\n[[]],2,0\n");
    let m = fs::read_to_string(dir.path().join("m_table.csv")).unwrap();
    assert_eq!(m, "tree,degree,m\n[],1,g\n[[]],2,0\n");
    let q = fs::read_to_string(dir.path().join("scattering_q.csv")).unwrap();
    assert!(q.starts_with("tree,degree,q_power,coefficient\n[],1,0,-g*eps^-1\n[],1,1,g*eps^-1\n"));

    let empty = tempfile::tempdir().unwrap();
    let o = ckrg(&[
        "report",
        "--suite",
        "",
        "--out",
        empty.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_dir(empty.path()).unwrap().count(), 0);
}

#[test]
fn beta_command() {
    let o = ckrg(&["beta", "--max-degree", "3", "--output", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("[],g,true,true"));
    assert!(text.contains("[[]],0,true,true"));
}

#[test]
fn reports_are_deterministic() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_ckrg"))
            .args(["verify", "--max-degree", "4"])
            .env("CKRG_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("1"));

    let o = Command::new(env!("CARGO_BIN_EXE_ckrg"))
        .arg("trees")
        .env("CKRG_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
