use std::io::Write;
use std::process::{Command, Stdio};

fn pph(args: &[&str], input: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pph"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn corner_mass_of_max0() {
    let (code, out) = pph(&[], "n = 1; h := max(0, x1); cycle c := corner-locus h; form b := {1} bump 1; pair c b");
    assert_eq!(code, 0);
    assert!(out.contains("4/3"), "{out}");
}

#[test]
fn parse_errors_carry_positions() {
    let (code, out) = pph(&["--json"], "n = 1;\nh := max()");
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "parse");
    assert!(v["error"]["message"].as_str().unwrap().starts_with("2:6"));
}

#[test]
fn generated_verifications_pass() {
    let (code, out) = pph(&["--json", "--seed", "5"], "n = 1; verify prop3; verify corollary3; verify balancing");
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r["passed"] == true));
}

#[test]
fn exports_are_versioned() {
    let (code, out) = pph(&["--json"], "n = 1; h := max(0, x1, y1); cycle c := corner-locus h; export chain c; export complex");
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let formats: Vec<&str> = v["reports"].as_array().unwrap().iter().filter_map(|r| r["data"]["format"].as_str()).collect();
    assert_eq!(formats, ["pph-chain/1", "pph-complex/1"], "{out}");
}
