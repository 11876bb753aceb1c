use std::f64::consts::PI;
use std::process::Command;

use serde_json::Value;

use conepar::reference::coulomb_closed;

fn conepar(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_conepar")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).expect("valid JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn fundsol_matches_cosh() {
    let (code, out, _) = conepar(&["shifted-laplacian", "--dim", "3", "--kappa-sq", "1", "fundsol", "--grid", "0.5,1,2", "--order", "40", "--tol", "1e-10"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["schema"], "conepar/1");
    for p in v["points"].as_array().unwrap() {
        let r = num(&p["r"]);
        let want = -r.cosh() / (4.0 * PI * r);
        assert!((num(&p["value"]) - want).abs() <= 1e-14 * want.abs());
        assert_eq!(p["status"], "ok");
    }
}

#[test]
fn fundsol_csv() {
    let (code, out, _) = conepar(&["shifted-laplacian", "--kappa-sq", "1", "fundsol", "--grid", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "r,value,tail_bound,status");
    assert!(lines[1].starts_with("1.000000000000000e0,-1.227944553101129e-1,"));
}

#[test]
fn coulomb_compare() {
    let (code, out, _) = conepar(&["coulomb", "--Z", "1", "--kappa-sq", "0", "compare", "--grid", "0.2,0.7,1.5", "--order", "40", "--tol", "1e-12"]);
    assert_eq!(code, 0, "{out}");
    for p in json(&out)["points"].as_array().unwrap() {
        let r = num(&p["r"]);
        let want = coulomb_closed(1.0, r, 60).unwrap();
        assert!((num(&p["engine"]) - want).abs() <= 1e-12 * want.abs());
    }
}

#[test]
fn unreachable_tolerance_is_recorded() {
    let (code, out, _) = conepar(&["shifted-laplacian", "--kappa-sq", "1", "fundsol", "--grid", "0.5,8", "--order", "30", "--tol", "1e-12"]);
    assert_eq!(code, 1);
    let v = json(&out);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts[0]["status"], "ok");
    assert_eq!(pts[1]["status"], "tail-bound-exceeded");
    assert!(num(&pts[1]["tail_bound"]) > 1e-12);
    assert_eq!(v["passed"], false);
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = conepar(&["coulomb", "--Z", "1", "--kappa-sq", "1/4", "verify", "--suite", "residues", "--ell", "1", "--order", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["passed"], true);
    let (code, out, _) = conepar(&["coulomb", "verify", "--suite", "residues", "--ell", "1", "--order", "3", "--tol", "1e-300"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["passed"], false);
    let (code, _, err) = conepar(&["coulomb", "verify", "--suite", "everything"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown suite"));
    let (code, out, _) = conepar(&["shifted-laplacian", "--kappa-sq", "1/4", "verify", "--suite", "kernel-compare", "--ell", "2"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn words_listing() {
    let (code, out, _) = conepar(&["coulomb", "--Z", "1", "--kappa-sq", "1", "words", "--order", "5"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["cardinality"], "8");
    assert_eq!(v["words"].as_array().unwrap().len(), 8);
}

#[test]
fn kernel_terms_and_value() {
    let (code, out, _) = conepar(&["shifted-laplacian", "--kappa-sq", "1/4", "kernel", "--ell", "0", "--order", "2", "--at", "1.5,0.5,0.3"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert!(!v["terms"].as_array().unwrap().is_empty());
    assert!(num(&v["value"]["kernel"]).is_finite());
}

#[test]
fn spec_files() {
    let dir = std::env::temp_dir().join(format!("conepar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(
        &good,
        r#"{
  "name": "shifted",
  "n": 3,
  "a2": ["1"],
  "a1": ["-1"],
  "a0": ["0", "0", "-kappa_sq"],
  "b": ["-1"],
  "parameters": {"kappa_sq": "1"}
}"#,
    )
    .unwrap();
    let (code, out, err) = conepar(&["--spec", good.to_str().unwrap(), "symbols", "--ell", "0", "--order", "2"]);
    assert_eq!(code, 0, "{err}");
    let (_, builtin, _) = conepar(&["shifted-laplacian", "--kappa-sq", "1", "symbols", "--ell", "0", "--order", "2"]);
    assert_eq!(json(&out)["symbol"], json(&builtin)["symbol"]);

    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\n  \"name\": \"x\",\n  \"n\": 3,\n  \"a2\": [\"1\"],\n  \"a1\": [\"-1\"],\n  \"a0\": [\"0\"],\n  \"b\": [\"minus one\"]\n}\n").unwrap();
    let (code, _, err) = conepar(&["--spec", bad.to_str().unwrap(), "symbols"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 7"), "{err}");

    let (code, _, err) = conepar(&["--spec", dir.join("missing.json").to_str().unwrap(), "symbols"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    std::fs::remove_dir_all(&dir).unwrap();
}
