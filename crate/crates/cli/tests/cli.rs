use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn here(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(rel)
}

fn lpsharp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpsharp")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    here(&format!("fixtures/{name}")).to_string_lossy().into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn demo_reports_match_golden_files() {
    for variant in ["curry-set", "curry-truth"] {
        for mode in ["unrestricted", "restricted"] {
            let out = lpsharp(&["demo", variant, "--mode", mode, "--format", "json"]);
            let golden = std::fs::read(here(&format!("golden/demo-{variant}-{mode}.json"))).unwrap();
            assert_eq!(
                String::from_utf8_lossy(&out.stdout),
                String::from_utf8_lossy(&golden),
                "{variant} {mode}"
            );
            let expected = if mode == "restricted" { 2 } else { 0 };
            assert_eq!(code(&out), expected, "{variant} {mode}");
        }
    }
}

#[test]
fn output_is_byte_stable() {
    for args in [
        vec!["demo", "curry-truth", "--mode", "restricted"],
        vec!["demo", "curry-set", "--format", "json"],
    ] {
        let a = lpsharp(&args);
        let b = lpsharp(&args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status, b.status);
    }
    let path = fixture("chain.toml");
    assert_eq!(
        lpsharp(&["saturate", &path, "--format", "json"]).stdout,
        lpsharp(&["saturate", &path, "--format", "json"]).stdout
    );
}

#[test]
fn golden_blocked_demos_stop_at_the_last_step() {
    for variant in ["curry-set", "curry-truth"] {
        let v: Value =
            serde_json::from_slice(&std::fs::read(here(&format!("golden/demo-{variant}-restricted.json"))).unwrap())
                .unwrap();
        assert_eq!(v["report"]["blocked_at"], "6");
        assert_eq!(v["report"]["conclusion"], Value::Null);
        let v: Value =
            serde_json::from_slice(&std::fs::read(here(&format!("golden/demo-{variant}-unrestricted.json"))).unwrap())
                .unwrap();
        assert_eq!(v["report"]["conclusion"], "|- f");
    }
}

#[test]
fn unrestricted_check_reaches_the_conclusion() {
    let out = lpsharp(&["check", &fixture("curry_set.lps"), "--mode", "unrestricted", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["conclusion"], "|- f");
    assert_eq!(report["blocked_at"], Value::Null);
    assert_eq!(report["steps"].as_array().unwrap().len(), 7);
}

#[test]
fn restricted_check_blocks_step_six() {
    for file in ["curry_set.lps", "curry_truth.lps"] {
        let out = lpsharp(&[
            "check",
            &fixture(file),
            "--mode",
            "restricted",
            "--blocked",
            "union(curry-set(all), curry-truth(all; T))",
            "--format",
            "json",
        ]);
        assert_eq!(code(&out), 2, "{file}");
        let report = stdout_json(&out);
        assert_eq!(report["blocked_at"], "6");
        let last = report["steps"].as_array().unwrap().last().unwrap().clone();
        assert_eq!(last["status"], "rejected");
        assert!(last["reason"].as_str().unwrap().starts_with("blocked-premise"));
    }
}

#[test]
fn restricted_without_spec_defaults_with_a_notice() {
    let out = lpsharp(&["check", &fixture("curry_set.lps"), "--mode", "restricted"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("curry-set(all)"), "{}", stderr(&out));
    let out = lpsharp(&["check", &fixture("curry_set.lps"), "--mode", "restricted", "--blocked", "curry-set(all)"]);
    assert!(stderr(&out).is_empty());
}

#[test]
fn empty_blocked_set_behaves_classically() {
    let out = lpsharp(&["demo", "curry-set", "--mode", "restricted", "--blocked", "none"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn demo_accepts_another_conclusion() {
    let out = lpsharp(&["demo", "curry-truth", "--falsum", "p & ~q", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["report"]["conclusion"], "|- p & ~q");
}

#[test]
fn rejected_step_exits_two() {
    let out = lpsharp(&["check", &fixture("bad_step.lps")]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stdout).contains("malformed"));
}

#[test]
fn parse_and_usage_errors_exit_one() {
    assert_eq!(code(&lpsharp(&["check", &fixture("malformed.lps")])), 1);
    assert_eq!(code(&lpsharp(&["check", &fixture("no_such_file.lps")])), 1);
    assert_eq!(code(&lpsharp(&["demo", "curry-sets"])), 1);
    assert_eq!(code(&lpsharp(&["demo", "curry-set", "--blocked", "curry-set("])), 1);
    assert_eq!(code(&lpsharp(&["demo", "curry-set", "--mode", "lenient"])), 1);
    assert_eq!(code(&lpsharp(&[])), 1);
    assert_eq!(code(&lpsharp(&["frobnicate"])), 1);
}

#[test]
fn help_documents_exit_codes() {
    let out = lpsharp(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("Exit codes"));
    for n in ["0", "1", "2", "3"] {
        assert!(text.contains(&format!("  {n}  ")), "{n}");
    }
    let out = lpsharp(&["check", "--help"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("Exit codes"));
}

#[test]
fn lint_flags_explosion_and_passes_weakening() {
    let out = lpsharp(&["lint", &fixture("explosion.txt"), "--format", "json"]);
    assert_eq!(code(&out), 3);
    let findings = stdout_json(&out)["findings"].as_array().unwrap().clone();
    assert_eq!(findings.len(), 1);
    assert_eq!(findings[0]["line"], 2);
    assert_eq!(code(&lpsharp(&["lint", &fixture("shared.txt")])), 0);
}

#[test]
fn lint_parse_error_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "p -> (q\n").unwrap();
    assert_eq!(code(&lpsharp(&["lint", path.to_str().unwrap()])), 1);
    std::fs::write(&path, "C -> p\n").unwrap();
    assert_eq!(code(&lpsharp(&["lint", path.to_str().unwrap()])), 1);
}

#[test]
fn saturate_finds_a_goal_and_prints_its_witness() {
    let out = lpsharp(&["saturate", &fixture("chain.toml"), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let dump = stdout_json(&out);
    assert_eq!(dump["goal"]["derived"], true);
    let script = dump["goal"]["witness_script"].as_str().unwrap();
    // the witness must itself check
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.lps");
    std::fs::write(&path, script).unwrap();
    let out = lpsharp(&["check", path.to_str().unwrap(), "--mode", "restricted", "--blocked", "curry-set(all)"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn restricted_saturation_is_data_not_failure() {
    let out = lpsharp(&["saturate", &fixture("curry.toml"), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let dump = stdout_json(&out);
    assert_eq!(dump["goal"]["derived"], false);
    assert!(dump["blocked_applications"].as_u64().unwrap() > 0);
    assert_eq!(dump["truncated"], false);
}

#[test]
fn bad_saturate_configs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.toml");
    for body in [
        "rules = [\"NOPE\"]\nseeds = []\n",
        "rules = [\"MP\"]\nseeds = [\"p ->\"]\n",
        "rules = [\"MP\"]\nseeds = [\"|- C\"]\n",
        "rules = [\"MP\"]\nseeds = []\nsurprise = 1\n",
        "not toml at all [",
    ] {
        std::fs::write(&path, body).unwrap();
        assert_eq!(code(&lpsharp(&["saturate", path.to_str().unwrap()])), 1, "{body}");
    }
}
