use std::io::Write;
use std::process::{Command, Output};

fn ratgroup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratgroup"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ratgroup(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    ratgroup(args).status.code().unwrap()
}

const TWO_STATE: &str = r#"{
  "states": ["a", "b"],
  "initial": "a",
  "transitions": {
    "a": { "0": { "out": "", "to": "b" }, "1": { "out": "11", "to": "a" } },
    "b": { "0": { "out": "0", "to": "a" }, "1": { "out": "10", "to": "a" } }
  }
}"#;

#[test]
fn eval_examples() {
    assert_eq!(stdout(&["eval", "x0", "01"]), "10\n");
    assert_eq!(stdout(&["eval", "id", "0110"]), "0110\n");
    assert_eq!(stdout(&["eval", "comp(fp(2),fp(2))", "0011"]), "0011\n");
    assert_eq!(stdout(&["eval", "fp(2)", "0000"]), "0101\n");
}

#[test]
fn eval_json() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["--format", "json", "eval", "x0", "1"])).unwrap();
    assert_eq!(v["output"], "11");
}

#[test]
fn canon_state_counts() {
    assert!(stdout(&["canon", "fp(5)"]).starts_with("states: 5\nrestrictions: 5\n"));
    assert!(stdout(&["canon", "id"]).starts_with("states: 1\n"));
}

#[test]
fn canon_of_machine_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(TWO_STATE.as_bytes()).unwrap();
    let path = f.path().to_str().unwrap();
    assert!(stdout(&["canon", path]).starts_with("states: 2\n"));
    let dot = stdout(&["dot", path]);
    assert!(dot.contains("\"a\" [shape=doublecircle]"));
    assert_eq!(stdout(&["eval", &format!("raw({path})"), "01"]), "10\n");
}

#[test]
fn equal_exit_codes() {
    assert_eq!(code(&["equal", "fix(x0)", "pair(x0, fix(x0))"]), 0);
    assert_eq!(code(&["equal", "x0", "id"]), 1);
    assert_eq!(code(&["equal", "comp(inv(x0),x0)", "id"]), 0);
}

#[test]
fn analyze_obliviousness() {
    let not = stdout(&["analyze", "fp(3)", "--p", "3"]);
    assert!(not.contains("machine oblivious to 3: no"), "{not}");
    assert!(not.contains("period 3"));
    assert!(stdout(&["analyze", "fp(3)", "--p", "2"]).contains("machine oblivious to 2: yes"));
    assert!(stdout(&["analyze", "id", "--p", "7"]).contains("machine oblivious to 7: yes"));
    assert_eq!(code(&["analyze", "id", "--p", "4"]), 2);
}

#[test]
fn verify_suites() {
    let out = stdout(&["verify", "hilbert", "--seed", "1", "--cases", "20"]);
    assert!(
        out.starts_with("hilbert: pass (24/24 cases, seed 1)"),
        "{out}"
    );
    let fp = stdout(&["verify", "fp-canonical", "--p", "7"]);
    assert!(fp.starts_with("fp-canonical: pass (1/1"), "{fp}");
    let obl = stdout(&["verify", "oblivious-product", "--p", "5", "--seed", "9"]);
    assert!(obl.starts_with("oblivious-product: pass (200/200"), "{obl}");
}

#[test]
fn verify_output_is_stable() {
    let args = [
        "--format",
        "json",
        "verify",
        "commutator",
        "--seed",
        "4",
        "--cases",
        "10",
    ];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["verify", "nope"]), 2);
    assert_eq!(code(&["eval", "pair(x0", "0"]), 2);
    assert_eq!(code(&["eval", "x0", "012"]), 2);
    assert_eq!(code(&["eval", "fp(4)", "0"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    let err = ratgroup(&["eval", "pair(x0, y)", "0"]);
    assert!(String::from_utf8_lossy(&err.stderr).contains("position 9"));
}

#[test]
fn gen_is_reproducible() {
    let a = stdout(&["gen", "element", "--seed", "5", "--depth", "3"]);
    assert_eq!(
        a,
        stdout(&["gen", "element", "--seed", "5", "--depth", "3"])
    );
    assert_eq!(
        stdout(&["gen", "element", "--seed", "0", "--depth", "0"]),
        "id\n"
    );
    let m = stdout(&["gen", "machine", "--seed", "2", "--states", "4"]);
    assert!(m.contains("\"transitions\""));
    // The printed element reparses.
    assert_eq!(code(&["canon", a.trim()]), 0);
}
