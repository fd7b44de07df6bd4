use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmodular"))
        .args(args)
        .env_remove("QMODULAR_DATA")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = run(&a);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

fn coeffs(n: &str) -> Vec<String> {
    let (code, v) = json(&["coeffs", n]);
    assert_eq!(code, 0);
    v["results"].as_array().unwrap().iter().map(|r| r["a"].as_str().unwrap().to_string()).collect()
}

#[test]
fn coefficients() {
    assert_eq!(coeffs("3"), ["1", "4", "20"]);
    assert_eq!(coeffs("4"), ["1", "4", "20", "120"]);
    assert_eq!(coeffs("1"), ["1"]);
    assert_eq!(run(&["coeffs", "0"]).status.code(), Some(2));
}

#[test]
fn verify_single_key() {
    let (code, v) = json(&["verify", "jacobi-quartic"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "qmodular-report/1");
    let r = v["results"].as_array().unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["name"], "jacobi-quartic");
    assert_eq!(r[0]["pass"], true);
    assert_eq!(r[0]["order"], 200);
}

#[test]
fn verify_unknown_key_is_usage_error() {
    assert_eq!(run(&["verify", "no-such-key"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "jacobi-quartic", "--order", "9"]).status.code(), Some(2));
    assert_eq!(run(&["pi", "--row", "1", "--prec", "32"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_all_passes_in_catalog_order() {
    let (code, v) = json(&["verify", "all", "--order", "200"]);
    assert_eq!(code, 0);
    let r = v["results"].as_array().unwrap();
    assert!(r.len() >= 25);
    assert_eq!(r[0]["name"], "jacobi-quartic");
    assert!(r.iter().all(|x| x["status"] == "pass"));
}

#[test]
fn literal_p2_reading_is_a_discrepancy() {
    let (code, v) = json(&["verify", "P2-parameterization-literal", "--order", "50"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["status"], "paper-discrepancy");
    assert_eq!(v["results"][0]["first_nonzero_exponent"], "2");
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "X-in-u", "dX-squared", "--order", "60", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["singular", "--all", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn pi_row_digits() {
    // C = 1/16 converges by a factor 0.65 per term.
    let (code, v) = json(&["pi", "--row", "3", "--terms", "80", "--prec", "512"]);
    assert_eq!(code, 1);
    assert_eq!(v["results"][0]["digits"], 15);
    let (code, v) = json(&["pi", "--row", "3", "--terms", "340", "--prec", "512"]);
    assert_eq!(code, 0);
    assert!(v["results"][0]["digits"].as_i64().unwrap() >= 60);
}

#[test]
fn pi_all_and_bad_rows() {
    let (code, v) = json(&["pi", "--all", "--prec", "512"]);
    assert_eq!(code, 1);
    let r = v["results"].as_array().unwrap();
    assert_eq!(r.len(), 13);
    let passing: Vec<i64> = r.iter().filter(|x| x["status"] == "pass").map(|x| x["row"].as_i64().unwrap()).collect();
    assert_eq!(passing, [7, 8, 9, 10, 11, 12, 13]);
    assert_eq!(run(&["pi", "--row", "0"]).status.code(), Some(2));
    assert_eq!(run(&["pi", "--row", "14"]).status.code(), Some(2));
    assert_eq!(run(&["pi"]).status.code(), Some(2));
}

#[test]
fn pi_one_term_reports_its_error() {
    let (code, v) = json(&["pi", "--row", "3", "--terms", "1"]);
    assert_eq!(code, 1);
    let r = &v["results"][0];
    assert_eq!(r["digits"], 0);
    assert!(r["error_log10"].as_f64().unwrap() > -1.0);
    assert!(r["value"].as_str().unwrap().starts_with("6.25e-2"));
}

#[test]
fn singular_values() {
    let (code, v) = json(&["singular", "--all"]);
    assert_eq!(code, 0);
    let r = v["results"].as_array().unwrap();
    assert_eq!(r.len(), 17);
    let disc: Vec<&Value> = r.iter().filter(|x| x["status"] == "paper-discrepancy").collect();
    assert_eq!(disc.len(), 1);
    assert_eq!(disc[0]["discriminant"], -1360);
    assert_eq!(disc[0]["substitute"]["pass"], true);
    let (code, v) = json(&["singular", "--form", "20,-12,5"]);
    assert_eq!(code, 0);
    assert!(v["results"][0]["error_log10"].as_f64().unwrap() < -40.0);
    assert_eq!(run(&["singular", "--form", "1,0,5"]).status.code(), Some(2));
}

#[test]
fn witness_table() {
    let (code, v) = json(&["table2", "--verify-all"]);
    assert_eq!(code, 1);
    let r = v["results"].as_array().unwrap();
    let count = |s: &str| r.iter().filter(|x| x["status"] == s).count();
    assert_eq!((count("pass"), count("fail"), count("paper-discrepancy")), (12, 3, 1));
}

#[test]
fn modular_equation() {
    let (code, v) = json(&["modeq", "--n", "3", "--bidegree", "4", "--order", "300"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["matches_psi3"], true);
    assert_eq!(v["results"][0]["nullity"], 1);
    let (code, _) = json(&["modeq", "--n", "3", "--bidegree", "2", "--order", "300"]);
    assert_eq!(code, 1);
    assert_eq!(run(&["modeq", "--n", "4"]).status.code(), Some(2));
    let (code, v) = json(&["modeq"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
}

#[test]
fn relations() {
    let (code, v) = json(&["relations", "z", "zu", "z/u", "zv", "z/v"]);
    assert_eq!(code, 0);
    let rel: Vec<&str> =
        v["results"][0]["report"]["relations"][0].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(rel, ["4", "-1", "-1", "5", "1"]);
    let (code, v) = json(&["relations", "--decompose", "Z"]);
    assert_eq!(code, 0);
    let p: Vec<&str> = v["results"][0]["eisenstein_form"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["coefficient"].as_str().unwrap())
        .collect();
    assert_eq!(p, ["-1/18", "0", "2/9", "-5/18", "0", "10/9", "8/3"]);
    assert_eq!(run(&["relations", "nope"]).status.code(), Some(2));
}

#[test]
fn data_file_override_and_out() {
    let dir = std::env::temp_dir().join(format!("qmodular-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let data = dir.join("tables.txt");
    std::fs::write(&data, "format 1\nt3 | 3/8 | 1/6 | 1/16\n").unwrap();
    let out = dir.join("report.json");
    let status = Command::new(env!("CARGO_BIN_EXE_qmodular"))
        .args(["pi", "--all", "--terms", "340", "--prec", "512", "--format", "json", "--out"])
        .arg(&out)
        .env("QMODULAR_DATA", &data)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 1);
    let bad = Command::new(env!("CARGO_BIN_EXE_qmodular"))
        .args(["pi", "--all"])
        .env("QMODULAR_DATA", dir.join("missing.txt"))
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("missing.txt"));
    std::fs::remove_dir_all(&dir).unwrap();
}
