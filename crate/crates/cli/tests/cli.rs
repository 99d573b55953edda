use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_affreach"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

const SHEAR: &str = r#"{"problem":"matrix-membership","generators":[[["1","2"],["0","1"]]],"target":[["1","6"],["0","1"]]}"#;

#[test]
fn hard_membership_routes_to_exact_solver() {
    let dir = TempDir::new().unwrap();
    let gen = run(&["gen", "multisubsetsum", "--a", "3,5", "--t", "11", "--variant", "membership"]);
    assert!(gen.status.success());
    let inst = write(&dir, "inst.json", &stdout(&gen));
    let out = run(&["solve", &inst]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "yes");
    assert_eq!(r["solver"], "detpm1");
    let res = write(&dir, "res.json", &stdout(&out));
    assert_eq!(run(&["verify", &inst, &res]).status.code(), Some(0));
}

#[test]
fn empty_generators_and_stdin() {
    let text = r#"{"problem":"matrix-membership","generators":[],"target":[["1","0"],["0","1"]]}"#;
    let mut child = bin().args(["solve", "-"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["witness"], serde_json::json!([]));
}

#[test]
fn forced_solver_precondition_is_an_error() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "inst.json", SHEAR);
    let out = run(&["solve", &inst, "--solver", "detminus1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("determinant"));
}

#[test]
fn verify_rejects_tampered_witness() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "inst.json", SHEAR);
    let good = r#"{"verdict":"yes","witness":[0,0,0],"certificate":null,"solver":"oracle","budget":{"max_len":12,"max_magnitude":null,"max_steps":0}}"#;
    let res = write(&dir, "good.json", good);
    assert_eq!(run(&["verify", &inst, &res]).status.code(), Some(0));
    let res = write(&dir, "bad.json", &good.replace("[0,0,0]", "[0,0]"));
    let out = run(&["verify", &inst, &res]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mismatch"));
}

#[test]
fn no_and_unknown_exit_codes() {
    let dir = TempDir::new().unwrap();
    let no = SHEAR.replace(r#"["1","6"]"#, r#"["1","5"]"#);
    let inst = write(&dir, "no.json", &no);
    assert_eq!(run(&["solve", &inst]).status.code(), Some(1));
    // (2 0; 0 1) doubles: the oracle runs out of length before reaching 2^20
    let far = r#"{"problem":"matrix-membership","generators":[[["2","0"],["0","1"]],[["3","0"],["0","1"]]],"target":[["1048576","0"],["0","1"]]}"#;
    let inst = write(&dir, "far.json", far);
    let out = run(&["solve", &inst, "--solver", "oracle", "--max-len", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["certificate"], serde_json::Value::Null);
}

#[test]
fn malformed_input_is_an_error() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "bad.json", r#"{"problem":"matrix-membership","generators":[[[1,2],[0,1]]],"target":[["1","0"],["0","1"]]}"#);
    assert_eq!(run(&["solve", &inst]).status.code(), Some(3));
    let inst = write(&dir, "tag.json", r#"{"problem":"nope"}"#);
    assert_eq!(run(&["solve", &inst]).status.code(), Some(3));
}

#[test]
fn bca_reduction_witness_replays() {
    let dir = TempDir::new().unwrap();
    let bca = r#"{"problem":"bca-reachability",
        "machine":{"states":["p","q"],"bound":"2","transitions":[{"from":"p","delta":"1","to":"q"},{"from":"q","delta":"1","to":"p"}]},
        "from":{"state":"p","value":"0"},"to":{"state":"p","value":"2"}}"#;
    let src = write(&dir, "bca.json", bca);
    let direct = run(&["solve", &src]);
    assert_eq!(direct.status.code(), Some(0));
    let gen = run(&["gen", "bca2arm", &src]);
    assert!(gen.status.success());
    let arm = write(&dir, "arm.json", &stdout(&gen));
    let out = run(&["solve", &arm, "--max-steps", "100", "--max-magnitude", "10000"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let res = write(&dir, "res.json", &stdout(&out));
    assert_eq!(run(&["verify", &arm, &res]).status.code(), Some(0));
}

#[test]
fn random_generation_is_seeded() {
    let a = run(&["gen", "random", "--family", "detpm1", "--seed", "9"]);
    let b = run(&["gen", "random", "--family", "detpm1", "--seed", "9"]);
    assert_eq!(stdout(&a), stdout(&b));
    let zero = run(&["gen", "random", "--generators", "0", "--seed", "3", "--family", "ut"]);
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "z.json", &stdout(&zero));
    assert!(Path::new(&inst).exists());
    let out = run(&["solve", &inst]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run(&["gen", "random", "--family", "nope"]).status.code(), Some(2));
}

#[test]
fn xcheck_reports_no_disagreements() {
    let out = run(&["xcheck", "--count", "40", "--seed", "42", "--family", "detpm1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r[0]["disagreements"], serde_json::json!([]));
    assert_eq!(stdout(&out), stdout(&run(&["xcheck", "--count", "40", "--seed", "42", "--family", "detpm1"])));
}
