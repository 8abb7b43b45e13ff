use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_manin")).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_manin"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn bound_table_json() {
    let out = run(&["bound", "32", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let bounds: Vec<&str> = v[0]["rows"].as_array().unwrap().iter().map(|r| r["bound"].as_str().unwrap()).collect();
    assert_eq!(bounds, ["-5", "-3", "-1", "0", "0", "0"]);
}

#[test]
fn manin_rows() {
    let v = json(&run(&["manin", "27", "--json"]));
    assert_eq!(v["rows"][0]["correction"], 1);
    let v = json(&run(&["manin", "27", "--family", "x1", "--json"]));
    assert_eq!(v["rows"][0]["correction"], 0);
    let v = json(&run(&["manin", "2^5*3", "--json"]));
    assert_eq!(v["rows"][0]["p"], 2);
    assert_eq!(v["rows"][0]["correction"], 0);
}

#[test]
fn verify_exit_codes() {
    let good = r#"{"label":"24a","N":24,"k":2,"p":2,"valL":1,"measured":"-1/1"}"#;
    assert_eq!(run_stdin(&["verify", "-"], good).status.code(), Some(0));
    let bad = r#"{"label":"24a","N":24,"k":2,"p":2,"valL":1,"measured":"-2/1"}"#;
    assert_eq!(run_stdin(&["verify", "-"], bad).status.code(), Some(1));
    assert_eq!(run_stdin(&["verify", "-"], "nonsense\n").status.code(), Some(2));
    assert_eq!(run(&["verify", "/nonexistent/file.jsonl"]).status.code(), Some(2));
    let v = json(&run_stdin(&["verify", "-", "--json"], good));
    assert_eq!(v["summary"]["sharp"], 1);
}

#[test]
fn input_errors() {
    assert_eq!(run(&["bound", "0"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "12", "--p", "4"]).status.code(), Some(2));
    assert_eq!(run(&["manin", "2^x"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn gauss_and_whittaker() {
    let v = json(&run(&["gauss", "b2", "--json"]));
    assert_eq!(v["closed_form_agrees"], true);
    assert_eq!(v["eps_valuation"], "0");
    let out = run(&["gauss", "--field", "5:2:7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&run(&["whittaker", "type3:p=2,mu=b3", "--ell", "3", "--t-min", "-4", "--t-max", "-4", "--json"]));
    assert_eq!(v["rows"][0]["value"]["valuation"], "-1/2");
}

#[test]
fn cusps_and_selftest() {
    let v = json(&run(&["cusps", "20", "--json"]));
    assert_eq!(v.as_array().unwrap().len(), 6);
    let out = run(&["selftest", "--quick"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn precision_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_manin"))
        .args(["gauss", "--field", "3:2:5", "--json"])
        .env("MANIN_PRECISION", "96")
        .output()
        .unwrap();
    assert_eq!(json(&out)["agree"], true);
}
