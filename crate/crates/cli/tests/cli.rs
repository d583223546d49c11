//! End-to-end tests against the compiled binary: report shapes, exit codes,
//! and byte-level determinism across worker counts.

use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_recurprimes"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn omega_fibonacci_prefix() {
    let out = run(&[
        "omega", "--r", "1", "--s", "1", "--u0", "0", "--u1", "1", "--N", "12",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["schema"], "recurprimes/1");
    assert_eq!(v["subcommand"], "omega");
    assert_eq!(v["results"]["omega_certain"], 8);
    assert_eq!(v["results"]["fully_resolved"], true);
    assert!(v["timing_ms"].is_number(), "timing present by default");
}

#[test]
fn artin_census_with_list() {
    let out = run(&["artin", "--a", "2", "--b", "3", "--x", "20", "--list"]);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["count"], 4);
    assert_eq!(v["results"]["excluded"], 2);
    assert_eq!(v["results"]["primes"], json!([5, 11, 13, 19]));
}

#[test]
fn verify_thm22_suite_exits_zero() {
    let out = run(&["verify", "--suite", "thm22"]);
    assert!(out.status.success());
    let table = String::from_utf8_lossy(&out.stderr);
    assert!(table.contains("PASS"), "stderr: {table}");
    assert!(table.contains("N=30:21") && table.contains("N=34:25"), "stderr: {table}");
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["results"]["pass"], true);
    assert_eq!(v["results"]["criteria"][0]["index"], 1);
}

#[test]
fn reports_are_independent_of_jobs() {
    let base = [
        "artin", "--a", "2", "--b", "3", "--x", "1000000", "--list", "--no-timing",
    ];
    let mut one: Vec<&str> = base.to_vec();
    one.extend(["--jobs", "1"]);
    let mut eight: Vec<&str> = base.to_vec();
    eight.extend(["--jobs", "8"]);
    let out_one = run(&one);
    let out_eight = run(&eight);
    assert!(out_one.status.success() && out_eight.status.success());
    assert_eq!(out_one.stdout, out_eight.stdout, "reports must be byte-identical");
    let v = stdout_json(&out_one);
    assert_eq!(v["results"]["count"], 45236);
    assert!(v.get("timing_ms").is_none(), "--no-timing drops timing_ms");
}

#[test]
fn jobs_env_var_is_honored() {
    let args = ["artin", "--a", "2", "--b", "3", "--x", "100000", "--no-timing"];
    let flag = run(&{
        let mut v = args.to_vec();
        v.extend(["--jobs", "1"]);
        v
    });
    let env = bin()
        .args(args)
        .env("RECURPRIMES_JOBS", "8")
        .output()
        .expect("binary runs");
    assert!(env.status.success());
    assert_eq!(flag.stdout, env.stdout);
    assert_eq!(stdout_json(&env)["results"]["count"], 5547);
}

#[test]
fn csv_format_lists_primes() {
    let out = run(&[
        "artin", "--a", "2", "--b", "3", "--x", "20", "--list", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "prime\n5\n11\n13\n19\n");
}

#[test]
fn gpf_window_fixture() {
    let out = run(&["gpf-window", "--a", "2", "--b", "3", "--n", "6", "--y", "2"]);
    let v = stdout_json(&out);
    let entries = v["results"]["entries"].as_array().unwrap();
    let gpfs: Vec<&str> = entries
        .iter()
        .map(|e| e["greatest_prime_factor"].as_str().unwrap())
        .collect();
    assert_eq!(gpfs, ["13", "29", "61"]);
}

#[test]
fn thue_family_smoke() {
    let out = run(&["thue", "--a", "2", "--b", "5", "--N", "6"]);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["usable"], 6);
    assert_eq!(v["results"]["class_count"], 6);
    assert_eq!(v["results"]["verified_solutions"], 6);
    assert_eq!(v["results"]["pigeonhole_ok"], true);
}

#[test]
fn curve_points_fixture() {
    let out = run(&["curve", "--a", "2", "--b", "5", "--N", "15"]);
    let v = stdout_json(&out);
    let points = v["results"]["points"].as_array().unwrap();
    let ds: Vec<&str> = points.iter().map(|p| p["d"].as_str().unwrap()).collect();
    assert_eq!(ds, ["3", "1019", "32763"]);
    assert_eq!(v["results"]["verified_points"], 3);
    assert_eq!(v["results"]["heights_within_bound"], true);
}

#[test]
fn curve_rational_variant() {
    let out = run(&[
        "curve", "--rational", "--a1", "3", "--a2", "2", "--b1", "5", "--b2", "1", "--N", "10",
    ]);
    let v = stdout_json(&out);
    let points = v["results"]["points"].as_array().unwrap();
    assert_eq!(points.len(), 1);
    assert_eq!(points[0]["d"], "53929");
    assert_eq!(points[0]["x"], "9/4");
    assert_eq!(points[0]["height"], "9");
}

#[test]
fn degenerate_input_exits_two() {
    let out = run(&[
        "omega", "--r", "0", "--s", "1", "--u0", "0", "--u1", "1", "--N", "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("degenerate"), "stderr: {text}");
}

#[test]
fn missing_argument_exits_two() {
    let out = run(&["rank", "--r", "1", "--s", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_suite_exits_two() {
    let out = run(&["verify", "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("unknown suite"), "stderr: {text}");
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join("recurprimes-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rank.json");
    let out = run(&[
        "rank", "--r", "1", "--s", "1", "--p", "7",
        "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "report goes to the file, not stdout");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["results"]["rank"], 8);
    std::fs::remove_file(&path).ok();
}
