use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn graphfn(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_graphfn"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn on(name: &str, args: &[&str]) -> Run {
    let path = fixture(name);
    let mut all = vec![args[0], path.to_str().unwrap()];
    all.extend_from_slice(&args[1..]);
    graphfn(&all)
}

fn temp_graph(name: &str, text: &str) -> PathBuf {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    let text = std::fs::read_to_string(&path).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_schema(run: &Run, command: &str) {
    let v = run.json();
    let envelope = schema("envelope.schema.json");
    if let Err(e) = envelope.validate(&v) {
        panic!("envelope: {e}");
    }
    assert_eq!(v["command"], command);
    let payload = schema(&format!("{command}.schema.json"));
    if let Err(e) = payload.validate(&v["payload"]) {
        panic!("{command} payload: {e}\n{}", run.stdout);
    }
}

fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDENS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(actual, expected, "golden {name} differs");
}

#[test]
fn check_g4() {
    let r = on("g4.graph", &["check"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_schema(&r, "check");
    let p = &r.json()["payload"];
    assert_eq!(p["verdict"], "convergent");
    assert_eq!((p["uv_count"].as_u64(), p["ir_count"].as_u64()), (Some(3), Some(1)));
    assert!(p["conditions"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    golden("check_g4.json", &r.stdout);
}

#[test]
fn check_divergent_names_edge() {
    let text = std::fs::read_to_string(fixture("g4.graph"))
        .unwrap()
        .replace("edge e1 0 x weight 1", "edge e1 0 x weight 2");
    let path = temp_graph("g4_uv.graph", &text);
    let r = graphfn(&["check", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert_schema(&r, "check");
    let p = &r.json()["payload"];
    assert_eq!(p["verdict"], "uv-divergent");
    let failed: Vec<&Value> = p["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["edges"], serde_json::json!(["e1"]));
}

#[test]
fn malformed_files_exit_one() {
    let path = temp_graph("bad.graph", "dim 4\nvertex 0 external\nedge e1 0\n");
    let r = graphfn(&["check", path.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
    let r = graphfn(&["check", "/nonexistent/file.graph"]);
    assert_eq!(r.code, 1);
    let r = graphfn(&["frobnicate"]);
    assert_eq!(r.code, 1);
}

#[test]
fn poly_table_entries() {
    let r = on("g4.graph", &["poly", "--partition", "01,z", "--text"]);
    assert_eq!(r.stdout, "psi[01,z] = a1*a2\n");
    let r = on("g4.graph", &["poly", "--phi", "--text"]);
    assert_eq!(r.stdout, "phi = s01*a1*a2+s0z*a1*a3+s1z*a2*a3\n");
    let r = on("g4.graph", &["poly", "--partition", "0,1,z", "--cremona"]);
    assert_eq!(r.code, 0);
    assert_schema(&r, "poly");
    assert_eq!(r.json()["payload"]["polynomials"][0]["cremona"], "a1*a2+a1*a3+a2*a3");
}

#[test]
fn poly_golden() {
    let r = on(
        "g4.graph",
        &[
            "poly",
            "--partition",
            "01,z",
            "--partition",
            "0z,1",
            "--partition",
            "1z,0",
            "--partition",
            "0,1,z",
            "--phi",
            "--cremona",
        ],
    );
    assert_eq!(r.code, 0);
    assert_schema(&r, "poly");
    golden("poly_g4.json", &r.stdout);
}

#[test]
fn poly_unknown_label() {
    let r = on("g4.graph", &["poly", "--partition", "0q,z"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("q"), "{}", r.stderr);
}

fn estimate(r: &Run) -> (f64, f64) {
    let e = &r.json()["payload"]["estimate"];
    (e["value"].as_f64().unwrap(), e["stderr"].as_f64().unwrap())
}

#[test]
fn eval_g4_at_i() {
    let r = on("g4.graph", &["eval", "--z", "i", "--samples", "200000", "--seed", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_schema(&r, "eval");
    let (v, s) = estimate(&r);
    // twice Catalan's constant
    assert!((v - 1.831_931_188_354_438).abs() < 4.0 * s, "{v} ± {s}");
    let c = on(
        "g4.graph",
        &[
            "eval",
            "--z",
            "i",
            "--samples",
            "200000",
            "--seed",
            "4",
            "--chart",
            "e2",
        ],
    );
    let (w, t) = estimate(&c);
    assert!((v - w).abs() < 4.0 * s.hypot(t));
    assert_eq!(c.json()["payload"]["chart"], "e2");
}

#[test]
fn eval_is_deterministic() {
    let args = ["eval", "--z", "0.5+0.75i", "--samples", "70000", "--seed", "9"];
    let a = on("h4.graph", &args);
    let mut serial = args.to_vec();
    serial.push("--serial");
    let b = on("h4.graph", &serial);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn eval_options() {
    let r = on(
        "g4.graph",
        &[
            "eval",
            "--s",
            "01=1",
            "--s",
            "0,z=1",
            "--s",
            "1z=1",
            "--samples",
            "20000",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_schema(&r, "eval");
    let r = on(
        "g4.graph",
        &[
            "eval",
            "--z",
            "i",
            "--samples",
            "20000",
            "--n",
            "e1=1",
            "--representation",
            "dual",
        ],
    );
    assert_eq!(r.json()["payload"]["n"], serde_json::json!([1, 0, 0]));
    let r = on(
        "g4.graph",
        &[
            "eval",
            "--z",
            "i",
            "--samples",
            "20000",
            "--representation",
            "direct",
            "--sampler",
            "low-discrepancy",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["payload"]["estimate"]["sampler"], "low-discrepancy");
}

#[test]
fn eval_refusals() {
    let r = on("g4.graph", &["eval", "--z", "1"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("z must avoid {0,1}"));
    let r = on("g4.graph", &["eval", "--z", "i", "--chart", "e9"]);
    assert_eq!(r.code, 1);
    let r = on("g4.graph", &["eval"]);
    assert_eq!(r.code, 1);
    let r = on(
        "g4_negative.graph",
        &["eval", "--z", "i", "--representation", "direct", "--samples", "1000"],
    );
    assert_eq!(r.code, 3, "{}", r.stderr);
    let text = std::fs::read_to_string(fixture("g4.graph"))
        .unwrap()
        .replace("weight 1", "weight 3/5");
    let path = temp_graph("g4_ir.graph", &text);
    let r = graphfn(&["eval", path.to_str().unwrap(), "--z", "i"]);
    assert_eq!(r.code, 2);
    assert_schema(&r, "check");
    assert_eq!(r.json()["payload"]["verdict"], "ir-divergent");
    let tree = "dim 4\nvertex 0 external\nvertex 1 external\nvertex z external\n\
                edge e1 0 z weight 1\nedge e2 1 z weight -1\n";
    let path = temp_graph("tree_pole.graph", tree);
    let r = graphfn(&["eval", path.to_str().unwrap(), "--z", "i", "--samples", "1000"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(r.stderr.contains("pole of Gamma"), "{}", r.stderr);
}

#[test]
fn integrand_dump() {
    let r = on("g4.graph", &["integrand"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_schema(&r, "integrand");
    golden("integrand_g4.json", &r.stdout);
    let r = on("g4.graph", &["integrand", "--representation", "direct"]);
    assert_schema(&r, "integrand");
    let r = on("g4_negative.graph", &["integrand"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.json()["payload"]["n"]
        .as_array()
        .unwrap()
        .iter()
        .any(|k| k.as_u64() > Some(0)));
}

#[test]
fn dual_h7_has_unit_weights() {
    let r = on("h7.graph", &["dual"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("# e1 <-> e1*"));
    let (g, rot) = graphfn::load_graph(&r.stdout).unwrap();
    assert!(rot.is_some());
    assert_eq!(g.edge_count(), 10);
    assert!(g.edges().iter().all(|e| e.weight == graphfn::rational::int(1)));
    golden("dual_h7.graph", &r.stdout);
    let j = on("h7.graph", &["dual", "--json"]);
    assert_schema(&j, "dual");
    assert_eq!(j.json()["payload"]["graph_file"], r.stdout);
}

#[test]
fn dual_h4_is_self_dual() {
    let r = on("h4.graph", &["dual", "--json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["payload"]["self_dual"], true);
}

#[test]
fn dual_refusals() {
    let r = on("g4.graph", &["dual"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("add edge 0–1 with weight 1"), "{}", r.stderr);
    let text: String = std::fs::read_to_string(fixture("h4.graph"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with("rotation"))
        .map(|l| format!("{l}\n"))
        .collect();
    let path = temp_graph("h4_plain.graph", &text);
    let r = graphfn(&["dual", path.to_str().unwrap()]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("rotation"));
}

#[test]
fn dual_output_file_round_trips() {
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("h7_dual.graph");
    let r = on("h7.graph", &["dual", "-o", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let back = graphfn(&["dual", out.to_str().unwrap()]);
    assert_eq!(back.code, 0, "{}", back.stderr);
    let (twice, _) = graphfn::load_graph(&back.stdout).unwrap();
    let (h7, _) = graphfn::load_graph(&std::fs::read_to_string(fixture("h7.graph")).unwrap()).unwrap();
    assert!(graphfn::dual::labeled_isomorphic(&twice, &h7));
}

#[test]
fn verify_dual_layers() {
    let r = on("h7.graph", &["verify-dual", "--exact-only"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_schema(&r, "verify-dual");
    let p = &r.json()["payload"];
    assert_eq!(p["all_hold"], true);
    assert!(p["numeric"].is_null());
    let r = on("h4.graph", &["verify-dual", "--z", "0.3+1.1i", "--samples", "100000"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_schema(&r, "verify-dual");
    assert_eq!(r.json()["payload"]["numeric"]["agrees"], true);
}

#[test]
fn digest_tracks_content() {
    let a = on("g4.graph", &["check"]).json();
    let b = on("h4.graph", &["check"]).json();
    assert_ne!(a["input_digest"], b["input_digest"]);
    assert_eq!(a["timestamp"], "2023-11-14T22:13:20Z");
}

#[test]
fn schemas_reject_malformed_payloads() {
    let check = schema("check.schema.json");
    let mut p = on("g4.graph", &["check"]).json()["payload"].clone();
    assert!(check.is_valid(&p));
    p["verdict"] = "fine".into();
    assert!(!check.is_valid(&p));
    let envelope = schema("envelope.schema.json");
    assert!(!envelope.is_valid(&serde_json::json!({ "tool": "graphfn" })));
}
