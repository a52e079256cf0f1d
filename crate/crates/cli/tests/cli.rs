use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

const GOLDEN: &str = "type = \"sft\"\nalphabet = 2\nforbidden = [\"11\"]\n";
const FULL: &str = "type = \"full\"\nalphabet = 2\n";

fn config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_symdyn")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn report(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn golden_log() -> f64 {
    ((1.0 + 5f64.sqrt()) / 2.0).ln()
}

#[test]
fn entropy_golden_mean() {
    let d = tempfile::tempdir().unwrap();
    let c = config(d.path(), "g.toml", GOLDEN);
    let r = report(&["--config", c.to_str().unwrap(), "entropy", "--no-timestamp"]);
    let est = r["results"]["cover_entropy"]["estimate"].as_f64().unwrap();
    assert!((est - golden_log()).abs() <= 0.05);
    assert_eq!(r["results"]["within_tolerance"], Value::Bool(true));
    assert_eq!(r["digest_of"], "config");
    assert_eq!(r["caps"]["states"], 1u64 << 24);
    let t = report(&["--config", c.to_str().unwrap(), "entropy", "--cover", "trivial", "--no-timestamp"]);
    assert_eq!(t["results"]["cover_entropy"]["estimate"].as_f64(), Some(0.0));
}

#[test]
fn malformed_config_names_the_field() {
    let d = tempfile::tempdir().unwrap();
    let c = config(d.path(), "bad.toml", "type = \"sft\"\nalphabet = 2\nforbiden = [\"11\"]\n");
    let (code, _, err) = run(&["--config", c.to_str().unwrap(), "entropy"]);
    assert_eq!(code, 2);
    assert!(err.contains("forbiden") && err.contains("line 3"), "{err}");
    let c = config(d.path(), "bad2.toml", "type = \"sft\"\nalphabet = 2\nforbidden = [\"13\"]\n");
    let (code, _, err) = run(&["--config", c.to_str().unwrap(), "entropy"]);
    assert_eq!(code, 2);
    assert!(err.contains("forbidden[0]"), "{err}");
}

#[test]
fn missing_config_is_a_validation_error() {
    let (code, _, err) = run(&["classify"]);
    assert_eq!(code, 2);
    assert!(err.contains("--config"), "{err}");
}

#[test]
fn lemma_tables() {
    let r = report(&["lemma", "--h", "0.4", "--n-lo", "4", "--no-timestamp"]);
    let rows = r["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    assert!(rows.iter().all(|row| row["holds"] == Value::Bool(true)));
    // h = log 2 admits every word
    let r = report(&["lemma", "--h", &format!("{}", 2f64.ln()), "--n-lo", "1", "--n-hi", "10", "--no-timestamp"]);
    for row in r["results"]["rows"].as_array().unwrap() {
        let n = row["n"].as_u64().unwrap();
        assert_eq!(row["count"].as_u64().unwrap(), 1 << n);
    }
    let (code, _, err) = run(&["lemma", "--h", "0.4", "--n-hi", "30"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn varprinciple_golden_mean() {
    let d = tempfile::tempdir().unwrap();
    let c = config(d.path(), "g.toml", GOLDEN);
    let c = c.to_str().unwrap();
    let r = report(&[
        "--config", c, "varprinciple", "--measure", "parry", "--measure", "perturb:0.2", "--schedule", "1:64,2:256",
        "--no-timestamp",
    ]);
    let h = &r["results"]["h_check"];
    let hc = h["h_check"].as_f64().unwrap();
    let hh = h["h_hat"].as_f64().unwrap();
    assert!((hc - golden_log()).abs() <= 0.05 && (hh - golden_log()).abs() <= 0.05);
    assert_eq!(h["chain_holds"], Value::Bool(true));
    assert_eq!(r["results"]["attain"]["certified"], Value::Bool(true));
    let t = report(&["--config", c, "varprinciple", "--cover", "trivial", "--schedule", "1:16", "--no-timestamp"]);
    assert!(t["results"]["h_check"]["h_check"].as_f64().unwrap().abs() < 1e-12);
    assert!(t["results"]["h_check"]["h_hat"].as_f64().unwrap().abs() < 1e-12);
    let (code, _, _) = run(&["--config", c, "varprinciple", "--measure", "bernoulli:1/2,1/2"]);
    assert_eq!(code, 2);
}

#[test]
fn towers() {
    let d = tempfile::tempdir().unwrap();
    let c = config(d.path(), "f.toml", FULL);
    let c = c.to_str().unwrap();
    let r = report(&["--config", c, "tower", "--kind", "kr", "-n", "3", "--measure", "uniform", "--no-timestamp"]);
    assert_eq!(r["results"]["heights"], serde_json::json!([3, 4]));
    assert_eq!(r["parameters"]["resolution"], 182);
    let r = report(&["--config", c, "tower", "--kind", "nest", "-n", "2", "--measure", "uniform", "--no-timestamp"]);
    let nested = &r["results"]["nested"];
    assert!(nested["min_height"].as_u64().unwrap() >= 6 && nested["max_height"].as_u64().unwrap() <= 14);
    let r = report(&[
        "--config", c, "tower", "--kind", "rohlin", "-n", "3", "--delta", "1/2", "--measure", "uniform", "--measure",
        "bernoulli:1/3,2/3", "--no-timestamp",
    ]);
    assert_eq!(r["results"]["disjoint"], Value::Bool(true));
    let (code, _, err) = run(&["--config", c, "tower", "--kind", "kr", "-n", "2", "--measure", "periodic:01"]);
    assert_eq!(code, 4, "{err}");
}

#[test]
fn weyl_and_recurrence() {
    let r = report(&["weyl", "--alpha", "sqrt2m1", "--recurrence-eps", "1/100", "--no-timestamp"]);
    assert!(r["results"]["average"]["magnitude"].as_f64().unwrap() < 0.05);
    assert_eq!(r["results"]["recurrence"]["hit"]["d"], "169");
    assert_eq!(r["parameters"]["precision"], 128);
    let (code, _, _) = run(&["weyl", "--alpha", "sqrt2m1", "--precision", "64"]);
    assert_eq!(code, 2);
}

#[test]
fn recurrence_sets() {
    let r = report(&["recur", "--kind", "ip", "--set", "1,2", "--no-timestamp"]);
    assert_eq!(r["results"]["set"]["members"], serde_json::json!([1, 2, 3]));
    let r = report(&["recur", "--kind", "bohr", "--alpha", "sqrt(2)", "--eps", "1/20", "--horizon", "30", "--no-timestamp"]);
    let m: Vec<i64> = r["results"]["set"]["members"].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()).collect();
    assert!(m.contains(&12) && m.contains(&17) && m.contains(&29) && !m.contains(&5));
    let d = tempfile::tempdir().unwrap();
    let c = config(d.path(), "p.toml", "type = \"sft\"\nalphabet = 2\nforbidden = [\"00\", \"11\"]\n");
    let r = report(&["--config", c.to_str().unwrap(), "recur", "--kind", "nset", "--u", "0", "--v", "0", "--horizon", "6", "--no-timestamp"]);
    assert_eq!(r["results"]["set"]["members"], serde_json::json!([-6, -4, -2, 0, 2, 4, 6]));
}

#[test]
fn classify_full_shift() {
    let d = tempfile::tempdir().unwrap();
    let c = config(d.path(), "f.toml", FULL);
    let r = report(&["--config", c.to_str().unwrap(), "classify", "--no-timestamp"]);
    assert_eq!(r["results"]["mixing"], Value::Bool(true));
    assert_eq!(r["results"]["agrees"], Value::Bool(true));
}

#[test]
fn reports_are_deterministic() {
    let d = tempfile::tempdir().unwrap();
    let c = config(d.path(), "g.toml", GOLDEN);
    let args = ["--config", c.to_str().unwrap(), "varprinciple", "--schedule", "1:32,2:128", "--seed", "7", "--no-timestamp"];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
    let with_time = report(&["--config", c.to_str().unwrap(), "entropy"]);
    assert!(with_time["wall_time_s"].is_number() && with_time["timestamp_unix"].is_number());
}

#[test]
fn csv_and_out_files() {
    let d = tempfile::tempdir().unwrap();
    let c = config(d.path(), "g.toml", GOLDEN);
    let csv = d.path().join("t.csv");
    let out = d.path().join("r.json");
    let (code, stdout, _) = run(&[
        "--config", c.to_str().unwrap(), "entropy", "--n-max", "4", "--csv", csv.to_str().unwrap(), "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let table = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "n,r,value");
    assert!(lines[2].starts_with("2,3,"));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["command"], "entropy");
}
