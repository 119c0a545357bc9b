mod support;

use std::path::PathBuf;
use std::process::{Command, Output};

use diaconf::critical::enumerate_pre_critical_pairs;
use diaconf::rulefile::parse_rule_file;
use support::{check_dot, dot_blocks};

fn systems() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../systems")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diaconf")).args(args).output().unwrap()
}

fn sys(name: &str) -> String {
    systems().join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn yang_baxter_is_not_confluent() {
    let o = run(&["check", "--mode", "frobenius", &sys("yang_baxter.rules")]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn empty_file_is_confluent() {
    let o = run(&["check", &sys("empty.rules")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn tiny_caps_are_inconclusive() {
    let o = run(&["check", "--max-steps", "5", "--json", &sys("ping_pong.rules")]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["verdict"], "inconclusive");
    assert_eq!(v["truncated"], true);
    assert_eq!(v["caps"]["max_steps"], 5);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(10));
}

#[test]
fn parse_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.rules");
    std::fs::write(&f, "signature {\n  gen f : 1 -> 1\n}\nrule r : f ; => f\n").unwrap();
    let o = run(&["check", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(11));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.rules:4:"), "{err}");
    let o = run(&["check", dir.path().join("missing.rules").to_str().unwrap()]);
    assert!(o.status.code().unwrap() >= 10);
}

#[test]
fn json_report_schema() {
    let o = run(&["check", "--json", &sys("swap.rules")]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["verdict"], "not-confluent");
    assert_eq!(v["mode"], "plain");
    let pairs = v["pairs"].as_array().unwrap();
    assert!(!pairs.is_empty());
    for p in pairs {
        for key in ["rules", "overlap_size", "parallel", "joinable"] {
            assert!(p.get(key).is_some(), "missing {key}");
        }
        if p["joinable"] == true {
            assert!(p.get("witness").is_some());
        }
    }
    assert!(pairs.iter().any(|p| p["joinable"] == false && p.get("overlap").is_some()));
}

fn strip_timing(mut v: serde_json::Value) -> serde_json::Value {
    let stats = v["stats"].as_object_mut().unwrap();
    stats.remove("enumeration_ms");
    stats.remove("checking_ms");
    v
}

#[test]
fn json_is_deterministic() {
    for f in ["swap.rules", "yang_baxter.rules", "two_wires.rules"] {
        let a = run(&["check", "--json", "--jobs", "1", &sys(f)]);
        let b = run(&["check", "--json", "--jobs", "4", &sys(f)]);
        assert_eq!(strip_timing(json(&a)), strip_timing(json(&b)), "{f}");
    }
}

#[test]
fn pair_count_matches_the_library() {
    for f in ["swap.rules", "yang_baxter.rules", "identity.rules", "fsa.rules"] {
        let src = std::fs::read_to_string(sys(f)).unwrap();
        let system = parse_rule_file(&src).unwrap().system(None).unwrap();
        let lib = enumerate_pre_critical_pairs(&system).unwrap().len();
        let o = run(&["pairs", "--json", &sys(f)]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(json(&o)["pairs"].as_array().unwrap().len(), lib, "{f}");
    }
}

#[test]
fn non_overlapping_rule_has_only_flagged_parallel_pairs() {
    let o = run(&["pairs", "--json", &sys("identity.rules")]);
    let v = json(&o);
    for p in v["pairs"].as_array().unwrap() {
        assert_eq!(p["nontrivial"], false);
        assert_eq!(p["shared_edges"].as_u64().unwrap() == 0, p["parallel"] == true);
    }
    assert!(v["pairs"].as_array().unwrap().iter().any(|p| p["parallel"] == true));
}

#[test]
fn swap_ground_pairs_listed() {
    let o = run(&["pairs", "--empty-interface", "--json", &sys("swap.rules")]);
    let v = json(&o);
    let shared: Vec<_> = v["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| p["shared_edges"].as_u64().unwrap() > 0 && p["rules"][0] != p["rules"][1])
        .collect();
    assert!(!shared.is_empty());
    let o = run(&["check", "--empty-interface", &sys("swap.rules")]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn every_dot_emission_parses() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for f in ["swap.rules", "yang_baxter.rules", "fsa.rules"] {
        let o = run(&["pairs", &sys(f)]);
        let blocks = dot_blocks(&stdout(&o));
        assert!(!blocks.is_empty());
        for b in blocks {
            check_dot(&b).unwrap_or_else(|e| panic!("{e}\n{b}"));
        }
    }
    run(&["check", "--dot", d, &sys("yang_baxter.rules")]);
    run(&["rewrite", "--dot", d, &sys("swap.rules"), "graph { node x y; edge a [x] [y]; interface [x y] }"]);
    let mut n = 0;
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let src = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        check_dot(&src).unwrap();
        n += 1;
    }
    assert!(n > 4);
}

#[test]
fn dot_checker_rejects_garbage() {
    assert!(check_dot("digraph { a -> b; }").is_ok());
    assert!(check_dot("graph { a -> b }").is_err());
    assert!(check_dot("digraph { a -> ; }").is_err());
    assert!(check_dot("digraph { a [label=\"x\"] ").is_err());
}

#[test]
fn identity_rule_reaches_a_fixed_point() {
    let o = run(&["rewrite", "--json", &sys("identity.rules"), "f ; f"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["productive_steps"], 0);
    assert_eq!(v["normal_form"], true);
    assert!(!v["steps"][0]["successors"].as_array().unwrap().is_empty());
}

#[test]
fn swap_input_lists_both_successors() {
    let o = run(&["rewrite", "--json", "--steps", "1", &sys("swap.rules"), "graph { node x y; edge a [x] [y]; interface [x y] }"]);
    let v = json(&o);
    let succ = v["steps"][0]["successors"].as_array().unwrap();
    assert_eq!(succ.len(), 2);
    let rules: Vec<_> = succ.iter().map(|s| s["rule"].as_str().unwrap()).collect();
    assert_eq!(rules, ["forward", "backward"]);
}

#[test]
fn verified_trace() {
    let o = run(&["rewrite", "--verify", "--json", &sys("yang_baxter.rules"), "(g + id:1) ; (id:1 + g) ; (g + id:1) ; (id:1 + g)"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verify_failures"], 0);
    assert!(v["productive_steps"].as_u64().unwrap() >= 1);
    let o = run(&["rewrite", "--verify", &sys("bimonoid.rules"), "mu ; d"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}
