use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn iptree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iptree"))
        .args(args)
        .env_remove("IPTREE_ORACLE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = iptree(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> (i32, String) {
    let out = iptree(args);
    (out.status.code().unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn infer_prints_lower_previsions() {
    let tree = fixture("coins3.tree.json");
    assert_eq!(stdout(&["infer", &tree, &fixture("coins3.h3.gamble.json")]), "0.064\n");
    assert_eq!(stdout(&["infer", "--exact", &tree, &fixture("coins3.h3.gamble.json")]), "8/125\n");
    assert_eq!(
        stdout(&["infer", "--upper", "--exact", &tree, &fixture("coins3.h3.gamble.json")]),
        "27/125\n"
    );
    assert_eq!(stdout(&["infer", "--at", "h2", &tree, &fixture("coins3.h3.gamble.json")]), "0.4\n");
    assert_eq!(stdout(&["infer", &tree, &fixture("coins3.constant.gamble.json")]), "5\n");
    let urn = fixture("urn.tree.json");
    assert_eq!(stdout(&["infer", &urn, &fixture("urn.green.gamble.json")]), "0.25\n");
    assert_eq!(stdout(&["infer", "--upper", &urn, &fixture("urn.green.gamble.json")]), "0.5\n");
}

#[test]
fn gambles_on_a_declared_cut() {
    let tree = fixture("coin2.tree.json");
    assert_eq!(stdout(&["infer", &tree, &fixture("coin2.heads.gamble.json")]), "0.75\n");
    assert_eq!(stdout(&["infer", &tree, &fixture("coin2.first.gamble.json")]), "0.5\n");
}

#[test]
fn witness_is_a_selection_document() {
    let out = stdout(&["infer", "--witness", &fixture("urn.tree.json"), &fixture("urn.green.gamble.json")]);
    let (value, doc) = out.split_once('\n').unwrap();
    assert_eq!(value, "0.25");
    let sel: iptree_cli::doc::SelectionDoc = iptree_cli::doc::parse(doc, "witness").unwrap();
    assert_eq!(sel.base, "urn");
    let choice: Vec<String> = sel.choices["urn"].iter().map(|n| n.text()).collect();
    assert_eq!(choice, ["-0.25", "0.75", "-0.25"]);
}

#[test]
fn oracle_agrees_and_respects_the_cap() {
    let out = stdout(&["oracle", &fixture("coins3.tree.json"), &fixture("coins3.h3.gamble.json")]);
    assert_eq!(out, "0.064\nh0\t0\nh1\t0\nh2\t0\n");
    let (c, err) = code(&["oracle", &fixture("coins30.tree.json"), &fixture("coins30.gamble.json")]);
    assert_eq!(c, 4);
    assert!(err.contains("2^30"), "{err}");
    let raised = stdout(&[
        "oracle",
        "--cap",
        "2^2",
        "--at",
        "h28",
        &fixture("coins30.tree.json"),
        &fixture("coins30.gamble.json"),
    ]);
    assert!(raised.starts_with("0.16\n"), "{raised}");
}

#[test]
fn wlln_reports() {
    let tree = fixture("coins6.tree.json");
    let plan = fixture("coins6.heads.plan.json");
    let out = stdout(&["wlln", &tree, &plan, "--epsilon", "2"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["holds"], true);
    assert_eq!(v["exact_lower"].to_string(), "1");
    let out = stdout(&["wlln", "--exact", "--oracle", &tree, &plan, "--epsilon", "1/2"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["holds"], true);
    assert_eq!(v["hedge_holds"], true);
    assert_eq!(v["exact_lower"], v["oracle_lower"]);
    let (c, err) = code(&["wlln", &tree, &fixture("coins6.overpriced.plan.json"), "--epsilon", "0.5"]);
    assert_eq!(c, 5, "{err}");
}

#[test]
fn score_and_gains() {
    let tree = fixture("coins6.tree.json");
    let plan = fixture("coins6.heads.plan.json");
    assert_eq!(stdout(&["score", &tree, &plan, "--realized", "h6"]), "1\n");
    let (c, _) = code(&["score", &tree, &plan, "--realized", "h3"]);
    assert_eq!(c, 5);
    let gains = stdout(&["gains", &tree, &plan]);
    assert_eq!(gains.lines().count(), 7);
    assert!(gains.starts_with("t1\t-0.4\n"), "{gains}");
}

#[test]
fn markov_operator_matches_enumeration() {
    let chain = fixture("chain2.chain.json");
    let f = fixture("chain2.a.gamble.json");
    assert_eq!(stdout(&["markov", &chain, &f, "-n", "1"]), "0.3\n");
    assert_eq!(stdout(&["markov", &chain, &f, "-n", "1", "--upper"]), "0.5\n");
    let csv = stdout(&["markov", &chain, &f, "--bench", "1..3"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,t_operator_ms,t_enum_ms,value_operator,value_enum"));
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[3], cols[4], "{line}");
    }
}

#[test]
fn bench_marks_budgeted_rows() {
    let csv = stdout(&["bench", "--horizons", "1,5", "--budget-ms", "20"]);
    let rows: Vec<&str> = csv.lines().collect();
    assert!(rows[1].ends_with(",1,completed"), "{csv}");
    assert!(rows[2].ends_with(",31,budget"), "{csv}");
}

#[test]
fn error_classes_map_to_exit_codes() {
    let urn = fixture("urn.tree.json");
    let (c, err) = code(&["infer", &urn, &fixture("urn.mismatch.gamble.json")]);
    assert_eq!(c, 3, "{err}");
    let (c, _) = code(&["infer", &urn, &urn]);
    assert_eq!(c, 2);
    let (c, _) = code(&["infer", &urn, &fixture("chain2.a.gamble.json")]);
    assert_eq!(c, 3);
    let (c, _) = code(&["infer", &urn, "/nonexistent.json"]);
    assert_eq!(c, 2);
}

#[test]
fn selfcheck_passes() {
    let out = stdout(&["selfcheck"]);
    assert!(!out.contains("FAIL"), "{out}");
}
