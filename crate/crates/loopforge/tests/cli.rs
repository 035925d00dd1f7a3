//! End-to-end tests of the `loopforge` binary: exit codes, file fixtures,
//! emit/ingest roundtrips, and JSON schema spot checks.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loopforge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn verdicts_exit_zero_operational_errors_do_not() {
    // FAIL is a computed verdict: exit 0.
    let out = run(&["propagate", "F5", "--eq", "cube"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("verdict: FAIL"));

    // Unknown inputs and unparsable equations are operational: nonzero.
    let out = run(&["analyze", "NOSUCH"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("error:"));
    let out = run(&["propagate", "F5", "--eq", "x*"]);
    assert!(!out.status.success());
}

#[test]
fn analyze_json_schema() {
    let out = run(&["--json", "analyze", "builtin:M12"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "analyze");
    assert_eq!(v["order"], 12);
    assert_eq!(v["associative"], false);
    assert_eq!(v["diassociative"], true);
    assert_eq!(v["guards"]["max_checks"], 100_000_000u64);
    assert!(v["subloops"]["total"].as_u64().unwrap() > 1);
}

#[test]
fn propagate_json_labels_witness_tuples() {
    let out = run(&["--json", "propagate", "builtin:F5", "--eq", "cube"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["propagates"], false);
    assert_eq!(v["witness"][0], "a");
    assert_eq!(v["failure"][0], "b");
    assert_eq!(v["subloop_size"], 5);
}

#[test]
fn builtin_list_has_at_least_nine_entries() {
    let out = run(&["builtin", "list"]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().count() >= 9);
    let out = run(&["--json", "builtin", "list"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["entries"].as_array().unwrap().len() >= 9);
}

#[test]
fn emit_sts13_has_26_block_lines_and_reingests() {
    let out = run(&["builtin", "emit", "STS13"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("13"));
    assert_eq!(lines.count(), 26);

    // Emitted files re-ingest to an identical object, bit for bit.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sts13.txt");
    std::fs::write(&path, &text).unwrap();
    let out2 = run(&["steiner", "validate", path.to_str().unwrap()]);
    assert!(stdout(&out2).contains("valid (13 points, 26 blocks)"));
}

#[test]
fn emit_loop_roundtrips_through_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f5.tbl");
    let out = run(&[
        "builtin",
        "emit",
        "F5",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "", "file output keeps stdout clean");

    let out = run(&["analyze", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("order: 5"));
    assert!(text.contains("associative: no"));

    // Emit again from the file-ingested loop: byte-identical table.
    let direct = run(&["builtin", "emit", "F5"]);
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        stdout(&direct)
    );
}

#[test]
fn steiner_to_loop_feeds_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s10.tbl");
    let out = run(&[
        "steiner",
        "to-loop",
        "STS9",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&["analyze", path.to_str().unwrap()]);
    let text = stdout(&out);
    assert!(text.contains("order: 10"));
    assert!(text.contains("classification: Steiner loop"));
    assert!(text.contains("simple: yes"));
}

#[test]
fn steiner_orient_produces_the_two_extensions() {
    for (diag, exponent) in [("0", "exponent: 2"), ("1", "exponent: 4")] {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("oriented.tbl");
        let out = run(&[
            "steiner",
            "orient",
            "STS9",
            "--diag",
            diag,
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        let out = run(&["analyze", path.to_str().unwrap()]);
        let text = stdout(&out);
        assert!(text.contains("order: 20"));
        assert!(text.contains(exponent), "diag {diag}: {text}");
        assert!(text.contains("commutative: no"));
    }
}

#[test]
fn oriented_file_token_order_is_respected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("oriented.sts");
    // One block, listed against sorted order.
    std::fs::write(&path, "3\nr q p\n").unwrap();
    let out = run(&["steiner", "orient", path.to_str().unwrap(), "--diag", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let table = stdout(&out);
    assert_eq!(table.lines().next(), Some("8"));
}

#[test]
fn goursat_reports_decomposition_and_rejects_non_subdirect() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mod2.tuples");
    std::fs::write(&path, "0 0\n1 1\n2 0\n3 1\n").unwrap();
    let out = run(&["goursat", "Z4", "x", "Z2", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("N1"));
    assert!(text.contains("{0, 2}"));
    assert!(text.contains("roundtrip: lifted graph reproduces the carrier"));

    let v: serde_json::Value = serde_json::from_str(&stdout(&run(&[
        "--json",
        "goursat",
        "Z4",
        "x",
        "Z2",
        path.to_str().unwrap(),
    ])))
    .unwrap();
    assert_eq!(v["n1"]["elements"], serde_json::json!(["0", "2"]));
    assert_eq!(v["quotient_order"], 2);
    assert_eq!(v["roundtrip_ok"], true);

    let bad = dir.path().join("flat.tuples");
    std::fs::write(&bad, "0 0\n0 1\n").unwrap();
    let out = run(&["goursat", "Z4", "x", "Z2", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(
        stderr(&out).contains("factor 0"),
        "names the failing projection: {}",
        stderr(&out)
    );
}

#[test]
fn goursat_accepts_labeled_tuples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("diag.tuples");
    std::fs::write(&path, "e e\na a\nb b\nc c\nd d\n").unwrap();
    let out = run(&["goursat", "F5", "x", "F5", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("common quotient order: 5"));
}

#[test]
fn extend_matches_builtin_construction() {
    let emitted = run(&["builtin", "emit", "COCYCLE28"]);
    assert!(emitted.status.success());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c28.coc");
    std::fs::write(&path, stdout(&emitted)).unwrap();

    let from_file = run(&["extend", path.to_str().unwrap()]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    let direct = run(&["builtin", "emit", "K28"]);
    assert_eq!(stdout(&from_file), stdout(&direct));

    let v: serde_json::Value =
        serde_json::from_str(&stdout(&run(&["--json", "extend", "builtin:COCYCLE28"]))).unwrap();
    assert_eq!(v["total_order"], 28);
    assert_eq!(v["steiner"], true);
    assert_eq!(v["center_size"], 2);
}

#[test]
fn extend_symmetric_flag_mirrors_file_entries() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("half.coc");
    // Only the upper triangle listed; --symmetric supplies the rest.
    let full = run(&["builtin", "emit", "COCYCLE28"]);
    let text = stdout(&full);
    let mut halved: Vec<&str> = text.lines().take(2).collect();
    let mut seen = std::collections::HashSet::new();
    for line in text.lines().skip(2) {
        let t: Vec<&str> = line.split_whitespace().collect();
        if seen.insert((t[1].to_string(), t[0].to_string())) {
            seen.insert((t[0].to_string(), t[1].to_string()));
            halved.push(line);
        }
    }
    std::fs::write(&path, halved.join("\n") + "\n").unwrap();

    let out = run(&["extend", path.to_str().unwrap(), "--symmetric"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), stdout(&run(&["builtin", "emit", "K28"])));
}

#[test]
fn identity_reindex_warning_on_shifted_tables() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shifted.tbl");
    std::fs::write(&path, "3\n1 2 0\n2 0 1\n0 1 2\n").unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("warning:") && text.contains("re-indexing"));
    assert!(text.contains("classification: abelian group"));
}

#[test]
fn max_order_guard_is_env_tunable() {
    let out = bin()
        .args(["analyze", "Z16"])
        .env("LOOPFORGE_MAX_ORDER", "8")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(stderr(&out).contains("LOOPFORGE_MAX_ORDER=8"));

    let out = bin()
        .args(["analyze", "Z16"])
        .env("LOOPFORGE_MAX_ORDER", "32")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn max_checks_guard_refuses_oversized_scans() {
    let out = bin()
        .args(["propagate", "M12", "--eq", "assoc"])
        .env("LOOPFORGE_MAX_CHECKS", "100")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(stderr(&out).contains("budget"));
}

#[test]
fn steiner_validate_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.sts");
    std::fs::write(&path, "7\n0 1 2\n0 1 3\n").unwrap();
    let out = run(&["steiner", "validate", path.to_str().unwrap()]);
    assert!(out.status.success(), "invalidity is a verdict, not an error");
    assert!(stdout(&out).contains("verdict: invalid"));

    // A missing file is operational.
    let missing = dir.path().join("nope.sts");
    let out = run(&["steiner", "validate", missing.to_str().unwrap()]);
    assert!(!out.status.success());
}

#[test]
fn anti_pasch_lists_configurations() {
    let out = run(&["steiner", "anti-pasch", "builtin:STS7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("not anti-Pasch (7 Pasch configurations)"));
    assert_eq!(
        text.lines().filter(|l| l.starts_with("  {")).count(),
        7,
        "one rendered line per configuration: {text}"
    );

    let out = run(&["--json", "steiner", "anti-pasch", "STS15AP"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["anti_pasch"], true);
    assert_eq!(v["pasch_count"], 0);
}

#[test]
fn relative_base_references_resolve_against_the_cocycle_file() {
    let dir = tempfile::tempdir().unwrap();
    let table = run(&["builtin", "emit", "Z3"]);
    std::fs::write(dir.path().join("base.tbl"), stdout(&table)).unwrap();
    let coc = dir.path().join("c.coc");
    std::fs::write(&coc, "Z2\nbase.tbl\n1 1 1\n").unwrap();
    let out = run(&["extend", coc.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("6"));
    assert!(Path::new(&dir.path().join("base.tbl")).exists());
}
