use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hooklab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hooklab"))
        .args(args)
        .env_remove("HOOKLAB_CACHE")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("hooklab-{}-{name}", std::process::id()));
    let _ = std::fs::remove_file(&p);
    p
}

const SQUARE: &str = "1/((1+z2+z3)*(1+z1+z2+z3)*(1+z2)*(1+z1+z2))";

#[test]
fn g_square_all_routes() {
    let out = hooklab(&["g", "--n", "4", "--r", "2", "--lambda", "2,2", "--mu", "0,0", "--route", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let routes: Vec<&str> = rows.iter().map(|r| r["route"].as_str().unwrap()).collect();
    assert_eq!(routes, ["recurrence", "chain", "excited"]);
    for r in rows {
        let g = hooklab::symbolic::parse(r["g"].as_str().unwrap()).unwrap();
        assert!(g.equal(&hooklab::symbolic::parse(SQUARE).unwrap()));
    }
}

#[test]
fn tuple_outside_rectangle_is_usage_error() {
    let out = hooklab(&["g", "--n", "4", "--r", "3", "--lambda", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n-r"));
    let out = hooklab(&["g", "--n", "4", "--r", "2", "--lambda", "0,1", "--mu", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hooklab(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decreasing_tuple_is_sorted_with_warning() {
    let out = hooklab(&["g", "--n", "4", "--r", "2", "--lambda", "2,1", "--mu", "0,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert_eq!(json(&out)[0]["lambda"], serde_json::json!([1, 2]));
}

#[test]
fn verify_all_up_to_five() {
    let out = hooklab(&["verify", "all", "--max-n", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 6);
    for r in reports {
        assert!(r["cases"].as_u64().unwrap() > 0);
        assert_eq!(r["failures"].as_array().unwrap().len(), 0);
        assert!(r["version"].is_string());
    }
}

#[test]
fn verify_g_flag() {
    let out = hooklab(&["g", "--n", "5", "--r", "2", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len() % 3, 0);
}

#[test]
fn warm_cache_gives_identical_reports() {
    let cache = scratch("cache.json");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hooklab"))
            .args(["g", "--n", "5", "--r", "2", "--route", "recurrence"])
            .env("HOOKLAB_CACHE", &cache)
            .output()
            .unwrap()
    };
    let cold = run();
    assert!(cache.exists());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    assert_eq!(doc["version"], 1);
    assert!(doc["entries"]["5/2/2,2/0,0"]["g"].is_string());
    let warm = run();
    assert_eq!(cold.stdout, warm.stdout);
    let uncached = hooklab(&["g", "--n", "5", "--r", "2", "--route", "recurrence"]);
    assert_eq!(cold.stdout, uncached.stdout);
    let _ = std::fs::remove_file(&cache);
}

#[test]
fn stale_cache_version_is_ignored() {
    let cache = scratch("stale.json");
    std::fs::write(&cache, r#"{"version":0,"entries":{}}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hooklab"))
        .args(["--cache", cache.to_str().unwrap(), "g", "--n", "3", "--r", "1", "--lambda", "2", "--mu", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ignoring cache"));
    let _ = std::fs::remove_file(&cache);
}

#[test]
fn whittaker_two_by_one() {
    let out = hooklab(&["whittaker", "--n", "2", "--r", "1", "--t", "0,5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["matrix"]["entries"], serde_json::json!([["1", "0"], ["1/5", "1"]]));
    assert_eq!(v["matrix"]["determinant"], "1");
    assert_eq!(v["unitriangular"], true);
}

#[test]
fn whittaker_retries_at_a_pole() {
    let out = hooklab(&["whittaker", "--n", "2", "--r", "1", "--t", "3,3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_ne!(v["matrix"]["t"], serde_json::json!(["3", "3"]));
}

#[test]
fn ratio_reports() {
    let out = hooklab(&["ratio", "--z", "1", "--kappa", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["lhs"].as_f64().unwrap() - 0.5).abs() < 1e-10);
    assert!((v["gamma_ratio"].as_f64().unwrap() - 0.5).abs() < 1e-10);
    let out = hooklab(&["ratio", "--z", "3", "--kappa", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn internal_failure_has_repro() {
    let out = hooklab(&["ratio", "--z", "3", "--kappa", "2", "--quadrature-points", "5"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("repro: hooklab ratio --z 3 --kappa 2 --quadrature-points 5"), "{err}");
}

#[test]
fn oracle_dump() {
    let out = hooklab(&["oracle", "--n", "4", "--r", "2", "--lambda", "2,2", "--dump-singular"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["corank"], 1);
    assert_eq!(v["agree"], true);
    assert_eq!(v["values"].as_array().unwrap().len(), 6);
    assert!(v["singular_vector"]["components"].is_array());
}

#[test]
fn hooks_weight_shift_verdict() {
    let out = hooklab(&["hooks", "--n", "4", "--r", "2", "--lambda", "2,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["weight_shift"]["plus_rule_matches"], true);
    assert_eq!(v["weight_shift"]["minus_rule_matches"], false);
    assert_eq!(v["change_of_variables"], "z1=y1, z2=-1+y2, z3=y3");
    assert_eq!(v["hook_length_limit"]["coefficient"], "1/12");
}

#[test]
fn weightfn_modes() {
    let circ = json(&hooklab(&["weightfn", "--n", "4", "--r", "2", "--lambda", "2,2", "--circ"]));
    assert_eq!(circ["terms"].as_array().unwrap().len(), 2);
    let out = hooklab(&["weightfn", "--n", "4", "--r", "2", "--lambda", "2,2", "--full"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["collapse"]["holds"], true);
    let out = hooklab(&["weightfn", "--n", "4", "--r", "2", "--lambda", "2,2", "--circ", "--star"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_and_latex_formats() {
    let out = hooklab(&["--format", "latex", "g", "--n", "3", "--r", "1", "--lambda", "1", "--mu", "0"]);
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.contains("\\frac"), "{s}");
    let out = hooklab(&["diagrams", "--n", "4", "--r", "2", "--format", "ascii"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 7);
    let out = hooklab(&["excited", "--n", "4", "--r", "2", "--lambda", "2,2", "--mu", "0,1"]);
    assert_eq!(json(&out)["count"], 2);
}
