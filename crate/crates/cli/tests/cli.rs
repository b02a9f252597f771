use std::process::{Command, Output};

fn perfcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perfcode")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn construct_writes_an_enumerable_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m15.code");
    let o = perfcode(&["construct", "mollard(hamming:3,p1)", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2049);
    assert!(text.starts_with("n=15 k=2048\n"));
}

#[test]
fn construct_trivial_code() {
    let o = perfcode(&["construct", "hamming:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n=1 k=1\n0\n");
}

#[test]
fn construct_large_code_gives_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("4918.code");
    assert_eq!(perfcode(&["construct", "builtin:4918", "-o", file.to_str().unwrap()]).status.code(), Some(0));
    let desc = format!("mollard(file:{},hamming:3)", file.display());
    let o = perfcode(&["--json", "construct", &desc]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 127);
    assert_eq!(v["representation"], "oracle");
}

#[test]
fn parse_errors_exit_2() {
    for args in [&["construct", "mollard(hamming:3"][..], &["invariants", "hamming:x"], &["propelinear", "builtin:999"]] {
        let o = perfcode(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    }
}

#[test]
fn invariants_of_4918() {
    let o = perfcode(&["invariants", "builtin:4918"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for line in ["rank: 14 (exhaustive)", "kernel_dim: 6 (exhaustive)", "mu: 0^15 (exhaustive)", "sym_order: 4", "zero_set: {1,2,3,4,6,7,8}"] {
        assert!(s.contains(line), "missing {line} in\n{s}");
    }
}

#[test]
fn invariants_of_hamming_7_json() {
    let o = perfcode(&["--json", "invariants", "hamming:3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"]["value"], 4);
    assert_eq!(v["kernel_dim"]["value"], 4);
    assert_eq!(v["mu_multiset"], "3^7");
}

#[test]
fn invariants_of_mollard_4918_p1() {
    let o = perfcode(&["invariants", "mollard(builtin:4918,p1)"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("rank: 29 (sampled-exact)"), "{s}");
    assert!(s.contains("kernel_dim: 21 (formula)"), "{s}");
    assert!(s.contains("mu: 1^30 15^1 (exhaustive)"), "{s}");
}

#[test]
fn starved_sampling_is_a_partial_report() {
    let o = perfcode(&["--sample-budget", "3", "invariants", "mollard(builtin:4918,p1)"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("(lower-bound)"));
}

#[test]
fn propelinear_verdicts_and_exit_codes() {
    let o = perfcode(&["propelinear", "hamming:4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: propelinear\nmethod: translation"));

    let o = perfcode(&["--json", "propelinear", "builtin:4918"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["certificate"]["kind"], "exhaustive-regular-search");

    let o = perfcode(&["--json", "propelinear", "mollard(builtin:4918,hamming:3)"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["certificate"]["kind"], "mollard-hamming");
    let witness = v["certificate"]["witness"].as_str().unwrap();
    let ones: Vec<usize> = witness.char_indices().filter(|&(_, c)| c == '1').map(|(i, _)| i + 1).collect();
    assert_eq!(ones, [9, 17, 25]);

    let o = perfcode(&["propelinear", "mollard(mollard(builtin:4918,hamming:2),hamming:2)"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn output_is_byte_stable() {
    let a = perfcode(&["--json", "invariants", "mollard(builtin:4918,p1)"]);
    let b = perfcode(&["--threads", "1", "--json", "invariants", "mollard(builtin:4918,p1)"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_budget_low() {
    let o = perfcode(&["verify", "--budget-low"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().filter(|l| l.starts_with("[PASS]")).count(), 5, "{s}");
    assert_eq!(s.lines().filter(|l| l.starts_with("[SKIP]")).count(), 7, "{s}");
}

#[test]
fn verify_full_suite() {
    let o = perfcode(&["verify"]);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{s}");
    assert_eq!(s.lines().filter(|l| l.starts_with("[PASS]")).count(), 12, "{s}");
}
