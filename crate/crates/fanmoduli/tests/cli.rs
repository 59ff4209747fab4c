//! End-to-end checks of the fanmoduli binary: JSON goldens, determinism, and
//! the exit-code contract (0 success, 1 domain error, 2 malformed input).

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fanmoduli"))
}

struct Fixtures {
    dir: PathBuf,
}

impl Fixtures {
    fn new(tag: &str) -> Fixtures {
        let dir = std::env::temp_dir().join(format!("fanmoduli-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Fixtures { dir }
    }

    fn file(&self, name: &str, value: &Value) -> String {
        let path = self.dir.join(name);
        std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
        path.to_str().unwrap().to_string()
    }
}

impl Drop for Fixtures {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.dir);
    }
}

fn c4() -> Value {
    json!({"d": 2, "n": 4, "cones": [[1], [2], [3], [4], [1, 2], [2, 3], [3, 4], [1, 4]]})
}

fn h0() -> Value {
    json!({"d": 2, "n": 4,
           "columns": [["1", "0"], ["0", "1"], ["-1", "0"], ["0", "-1"]]})
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn validate_reports_and_exits_by_outcome() {
    let f = Fixtures::new("validate");
    let good = f.file("c4.json", &c4());
    let out = run(&["validate", "--in", &good]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["ok"], json!(true));
    assert_eq!(v["maximal"], json!(true));
    assert_eq!(v["degenerations"], json!(14));

    // missing downward closure: {1,2} without {2}
    let bad = f.file(
        "bad.json",
        &json!({"d": 2, "n": 4, "cones": [[1], [3], [4], [1, 2], [2, 3], [3, 4], [1, 4]]}),
    );
    let out = run(&["validate", "--in", &bad]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["ok"], json!(false));
    assert!(v["axiom"].is_string());
}

#[test]
fn signs_and_admissible_goldens() {
    let f = Fixtures::new("signs");
    let t = f.file("c4.json", &c4());
    let h = f.file("h0.json", &h0());
    let out = run(&["signs", "--type", &t, "--cal", &h]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_json(&out),
        json!({"signs": {"12": 1, "23": 1, "34": 1, "14": -1}})
    );
    let out = run(&["admissible", "--type", &t, "--cal", &h]);
    assert_eq!(stdout_json(&out), json!({"admissible": true}));

    let inadmissible = f.file(
        "flip.json",
        &json!({"d": 2, "n": 4,
                "columns": [["1", "0"], ["0", "1"], ["-1", "0"], ["0", "1"]]}),
    );
    let out = run(&["admissible", "--type", &t, "--cal", &inadmissible]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), json!({"admissible": false}));
}

#[test]
fn autgroup_and_canonical() {
    let f = Fixtures::new("aut");
    let t = f.file("c4.json", &c4());
    let out = run(&["autgroup", "--in", &t]);
    assert_eq!(stdout_json(&out)["order"], json!(8));

    let h = f.file(
        "h.json",
        &json!({"d": 2, "n": 4,
                "columns": [["1", "0"], ["0", "1"], ["-2", "1"], ["-1", "-3"]]}),
    );
    let orbit = stdout_json(&run(&["orbit", "--type", &t, "--cal", &h]));
    assert_eq!(orbit["size"], json!(8));
    let canon = stdout_json(&run(&["canonical", "--type", &t, "--cal", &h]));
    // the canonical form is the least orbit element, hence orbit-invariant
    let other = f.file("other.json", &orbit["elements"][3]);
    assert_eq!(
        canon,
        stdout_json(&run(&["canonical", "--type", &t, "--cal", &other]))
    );
    let iso = stdout_json(&run(&["isomorphic", "--type", &t, "--cal", &h, "--other", &other]));
    assert_eq!(iso["isomorphic"], json!(true));
}

#[test]
fn grassmann_pipeline() {
    let f = Fixtures::new("grass");
    let h = f.file("h0.json", &h0());
    let out = run(&["gale", "--cal", &h]);
    assert_eq!(
        stdout_json(&out),
        json!([["1", "0", "1", "0"], ["0", "1", "0", "1"]])
    );
    let k = f.file("k.json", &json!([["1", "0", "1", "0"], ["0", "1", "0", "1"]]));
    let p = stdout_json(&run(&["plucker", "--in", &k]));
    assert_eq!(
        p["coords"],
        json!({"12": "1", "13": "0", "14": "1", "23": "-1", "24": "0", "34": "1"})
    );
    let ck = stdout_json(&run(&["chart", "--in", &k, "--rows", "3,4"]));
    assert_eq!(ck["chart"], json!([3, 4]));
    let tr = stdout_json(&run(&["transition", "--in", &k, "--from", "1,2", "--to", "3,4"]));
    assert_eq!(tr, json!([["1", "0"], ["0", "1"]]));

    let t = f.file("c4.json", &c4());
    let conds = stdout_json(&run(&["closure", "--type", &t, "--base", &h]));
    assert_eq!(conds.as_array().unwrap().len(), 6);
    assert_eq!(
        conds
            .as_array()
            .unwrap()
            .iter()
            .filter(|c| c["sign"] == json!(-1))
            .count(),
        3
    );
}

#[test]
fn boundary_pipeline() {
    let f = Fixtures::new("bound");
    let t = f.file("c4.json", &c4());
    let base = f.file("h0.json", &h0());
    let h = f.file(
        "h.json",
        &json!({"d": 2, "n": 4,
                "columns": [["1", "0"], ["0", "1"], ["0", "0"], ["0", "-1"]]}),
    );
    let dt = stdout_json(&run(&["degenerate", "--type", &t, "--cal", &h]));
    assert_eq!(dt["cones"], json!([[1], [1, 2], [1, 4], [2], [4]]));

    let s = stdout_json(&run(&["classify", "--type", &t, "--cal", &h, "--base", &base]));
    assert_eq!(s["removed_cones"], json!([[2, 3], [3], [3, 4]]));

    let zp = stdout_json(&run(&["zeropatterns", "--in", &t]));
    assert_eq!(zp["n"], json!(4));
    assert!(zp["patterns"].as_array().unwrap().contains(&json!([1, 2])));

    let scan = run(&[
        "strata-scan", "--type", &t, "--base", &base, "--samples", "2000", "--seed", "5",
    ]);
    assert_eq!(scan.status.code(), Some(0));
    assert_eq!(stdout_json(&scan)["count"], json!(8));
    // deterministic under a fixed seed
    let again = run(&[
        "strata-scan", "--type", &t, "--base", &base, "--samples", "2000", "--seed", "5",
    ]);
    assert_eq!(scan.stdout, again.stdout);

    // outside the closure of the base chart: domain error, exit 1
    let off = f.file(
        "off.json",
        &json!({"d": 2, "n": 4,
                "columns": [["1", "0"], ["0", "1"], ["-1", "-1"], ["-2", "-1"]]}),
    );
    let out = run(&["classify", "--type", &t, "--cal", &off, "--base", &base]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_json(&out)["error"].is_string());
}

#[test]
fn project_and_render() {
    let f = Fixtures::new("proj");
    let h = f.file(
        "h.json",
        &json!({"d": 2, "n": 4,
                "columns": [["1", "0"], ["0", "1"], ["-1", "-1"], ["0", "-2"]]}),
    );
    let out = stdout_json(&run(&["project", "--cal", &h, "--i", "2", "--j", "4"]));
    assert_eq!(out, json!({"alpha": "1", "row": ["1", "0", "-1", "0"]}));

    let t = f.file("c4.json", &c4());
    let svg = run(&["render", "--type", &t, "--cal", &h]);
    assert_eq!(svg.status.code(), Some(0));
    let text = String::from_utf8(svg.stdout).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<line").count(), 4);
    assert_eq!(svg.stderr.len(), 0);
    assert_eq!(text, String::from_utf8(run(&["render", "--type", &t, "--cal", &h]).stdout).unwrap());
}

#[test]
fn stdin_input_and_out_flag() {
    let f = Fixtures::new("stdin");
    let mut child = bin()
        .args(["plucker", "--in", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"[["1","0","1","0"],["0","1","0","1"]]"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["rank"], json!(2));

    let t = f.file("c4.json", &c4());
    let target = f.dir.join("aut.json");
    let out = run(&["autgroup", "--in", &t, "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout.len(), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["order"], json!(8));
}

#[test]
fn malformed_input_exits_2() {
    let f = Fixtures::new("err");
    let garbage = f.file("garbage.json", &json!("not a type"));
    let out = run(&["validate", "--in", &garbage]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(out.stdout.len(), 0);
    assert!(!out.stderr.is_empty());

    let out = run(&["signs", "--type", "/nonexistent.json", "--cal", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}
