use std::process::{Command, Output};

use serde_json::Value;

fn lh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lh"))
        .args(args)
        .env_remove("LH_DEFAULT_NODES")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn iwasawa_of_identity() {
    let out = lh(&["iwasawa", "--matrix", "[1,0,0,0,1,0,0,0,1]", "--no-meta"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    for key in ["t", "u", "theta"] {
        assert_eq!(v[key].as_f64(), Some(0.0), "{key}");
    }
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("-0"), "{text}");
}

#[test]
fn eigencheck_passes() {
    let out = lh(&["eigencheck", "--w", "0.5", "--z", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!(v["result"]["rel_err"].as_f64().unwrap() < 1e-4);
    assert_eq!(v["meta"]["command"], "eigencheck");
}

#[test]
fn charcheck_tolerance_gate() {
    let ok = lh(&["charcheck", "--s", "i", "--n", "1", "--tol", "0.02", "--no-meta"]);
    assert_eq!(ok.status.code(), Some(0));
    let v = json_of(&ok);
    assert!(v["rel_err"].as_f64().unwrap() < 0.02);
    let strict = lh(&["charcheck", "--s", "i", "--n", "1", "--tol", "1e-6", "--no-meta"]);
    assert_eq!(strict.status.code(), Some(3));
    assert_eq!(json_of(&strict)["rel_err"], v["rel_err"]);
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(lh(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(lh(&["eigencheck", "--w", "0.5", "--z", "1,2", "--bogus"]).status.code(), Some(1));
    assert_eq!(lh(&["eigencheck", "--w", "zz", "--z", "1,2"]).status.code(), Some(1));
    let off_group = lh(&["iwasawa", "--matrix", "[1,0,0,0,2,0,0,0,1]"]);
    assert_eq!(off_group.status.code(), Some(2));
    assert_eq!(lh(&["spherical", "--w", "0.5", "--z", "0,-1"]).status.code(), Some(2));
    assert_eq!(lh(&["ktypes", "--rep", "D+3"]).status.code(), Some(2));
    assert_eq!(lh(&["eigencheck", "--w", "0.5", "--z", "1,2", "--nodes", "4"]).status.code(), Some(2));
    assert_eq!(lh(&["separate", "--nodes", "0"]).status.code(), Some(2));
    assert_eq!(lh(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_output_is_deterministic() {
    let args = ["gram", "--params", "i,2i,0.5", "--n", "0", "--tmax", "2", "--no-meta"];
    let a = lh(&args);
    let b = lh(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let charcheck = ["charcheck", "--grid", "32,32,48", "--trunc", "8", "--no-meta", "--tol", "1"];
    let one = lh(&charcheck);
    let mut threaded = charcheck.to_vec();
    threaded.extend(["--threads", "4"]);
    let four = lh(&threaded);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn ray_emits_csv() {
    let out = lh(&["spherical", "--w", "0.5+1i", "--ray", "--steps", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,re,im");
    assert_eq!(lines.len(), 6);
}

#[test]
fn default_nodes_from_environment() {
    let args = ["spherical", "--w", "0.5+3i", "--z", "2,5", "--no-meta"];
    let default = json_of(&lh(&args));
    let coarse = Command::new(env!("CARGO_BIN_EXE_lh"))
        .args(args)
        .env("LH_DEFAULT_NODES", "16")
        .output()
        .unwrap();
    assert_ne!(json_of(&coarse)["phi"], default["phi"]);
}

#[test]
fn single_suite_criterion() {
    let out = lh(&["suite", "--only", "3", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("[PASS]  3. lie layer"), "{text}");
    assert_eq!(lh(&["suite", "--only", "99"]).status.code(), Some(2));
}

#[test]
fn ladder_and_gram_gates() {
    assert_eq!(lh(&["ladder", "--m", "2", "--sign", "+"]).status.code(), Some(0));
    assert_eq!(lh(&["gram", "--params", "i,2i,i"]).status.code(), Some(3));
    assert_eq!(lh(&["haarcheck", "--grid", "48,48,64", "--density", "exp-t"]).status.code(), Some(3));
}

#[test]
fn negative_values_parse() {
    assert_eq!(lh(&["spherical", "--w", "0.5", "--ray", "--tmax", "-1", "--steps", "2"]).status.code(), Some(0));
    assert_eq!(lh(&["separate", "--probe", "-0.5,1"]).status.code(), Some(0));
    assert_eq!(lh(&["eigencheck", "--w", "-0.5+1i", "--z", "1,2"]).status.code(), Some(0));
    assert_eq!(lh(&["ktypes", "--rep", "D-4", "--n", "-2"]).status.code(), Some(0));
}
