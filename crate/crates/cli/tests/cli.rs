use std::process::Command as Process;

use gck_cli::{main_with_args, EXIT_DOMAIN, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gck").chain(args.iter().copied());
    let code = main_with_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    assert!(!out.is_empty(), "no output, stderr: {err}");
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn check_length_published_examples() {
    let (code, v) = json(&["check-length", "S3", "--lengths", "0,1,1.4142135", "--paper-order"]);
    assert_eq!(code, EXIT_OK);
    let verdicts = &v["result"]["verdicts"];
    assert_eq!(verdicts["definition"], true);
    assert_eq!(verdicts["constraints"], true);
    assert_eq!(verdicts["kernel_sweep"], true);

    let (code, v) = json(&["check-length", "S3", "--lengths", "0,1,2", "--paper-order"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["conditionally_negative"], false);
    assert_eq!(v["result"]["verdicts"]["kernel_sweep"], false);
}

#[test]
fn envelope_fields() {
    let (_, v) = json(&["group-info", "Q8"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["tool"], "gck");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["group"], "Q8");
    assert_eq!(v["ordering_hash"].as_str().unwrap().len(), 64);
    assert_eq!(v["tolerances"]["psd"], 1e-9);
    assert_eq!(v["result"]["order"], 8);
    assert_eq!(v["result"]["center"], serde_json::json!([0, 1]));
}

#[test]
fn group_info_table() {
    let (code, v) = json(&["group-info", "S3", "--table"]);
    assert_eq!(code, EXIT_OK);
    let t = v["result"]["multiplication_table"].as_array().unwrap();
    assert_eq!(t.len(), 6);
    assert_eq!(t[0], serde_json::json!([0, 1, 2, 3, 4, 5]));
    assert_eq!(v["result"]["class_sizes"], serde_json::json!([1, 2, 3]));
}

#[test]
fn chartable_in_published_order() {
    let (code, v) = json(&["chartable", "S3", "--paper-order"]);
    assert_eq!(code, EXIT_OK);
    let chi = &v["result"]["chi"];
    // complex entries serialize as [re, im]
    assert_eq!(chi[1], serde_json::json!([[2.0, 0.0], [0.0, 0.0], [-1.0, 0.0]]));
    assert_eq!(v["result"]["class_sizes"], serde_json::json!([1, 3, 2]));
    assert_eq!(v["result"]["validation"]["passed"], true);
}

#[test]
fn decompose_and_evolve() {
    let (code, v) = json(&["decompose", "S3", "--lengths", "0,1,2", "--paper-order", "--t", "0.1"]);
    assert_eq!(code, EXIT_OK);
    let p3 = v["result"]["p"][2].as_f64().unwrap();
    assert!((p3 + 0.012841791).abs() < 1e-8);
    assert_eq!(v["result"]["convex_for_all_t"]["convex"], false);

    let (code, v) = json(&[
        "evolve", "Z2", "--lengths", "0,1", "--t", "1", "--element", "[[0.5, 1], 2]",
    ]);
    assert_eq!(code, EXIT_OK);
    let out = &v["result"]["output"];
    assert_eq!(out[0], serde_json::json!([0.5, 1.0]));
    assert!((out[1][0].as_f64().unwrap() - 2.0 * (-1f64).exp()).abs() < 1e-15);
}

#[test]
fn sweep_csv_and_json() {
    let (code, out, _) = run(&["sweep", "S3", "--lengths", "0,2,1", "--points", "5", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("# schema=1"));
    assert_eq!(lines[1], "t,p1,p2,p3,min_p,kernel_min_eigenvalue,kernel_psd");
    assert_eq!(lines.len(), 7);
    let (code, v) = json(&["sweep", "S3", "--lengths", "0,2,1", "--t-min", "0.5", "--t-max", "1.5", "--points", "3", "--spacing", "linear"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["result"]["points"][1]["t"], 1.0);
    let (code, _, _) = run(&["sweep", "S3", "--lengths", "0,2,1", "--t-min", "0"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn circulant_report_and_dump() {
    let e = |x: f64| (-x).exp().to_string();
    let f = format!("1,{},{}", e(1.0), e(2f64.sqrt()));
    let (code, v) = json(&["circulant", "S3", "--class-function", &f, "--paper-order"]);
    assert_eq!(code, EXIT_OK);
    let verdicts = &v["result"]["psd_verdicts"];
    assert_eq!(verdicts["dense"], true);
    assert_eq!(verdicts["coefficients"], true);
    assert_eq!(verdicts["log_length_cond_negative"], true);
    let mult: Vec<u64> = v["result"]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["multiplicity"].as_u64().unwrap())
        .collect();
    assert_eq!(mult, vec![1, 4, 1]);
    assert_eq!(v["result"]["multiplicities"]["confirmed"], true);

    let (code, out, _) = run(&["circulant", "S3", "--class-function", "1,0,0", "--dump-matrix"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[2], "1,0,0,0,0,0,0,0,0,0,0,0");

    // f(C^-1) != conj f(C) on Z3
    let (code, _, err) = run(&["circulant", "Z3", "--class-function", "1,0.5,0.5", "--class-function-imag", "0,0.1,0.1"]);
    assert_eq!(code, EXIT_DOMAIN, "{err}");
}

#[test]
fn verify_paper_all_and_subset() {
    let (code, v) = json(&["verify-paper"]);
    assert_eq!(code, EXIT_OK);
    let fixtures = v["result"]["fixtures"].as_array().unwrap();
    assert_eq!(fixtures.len(), gck_cli::verify::FIXTURES.len());
    assert!(fixtures.iter().all(|f| f["passed"] == true));

    let (code, v) = json(&["verify-paper", "--only", "s4-appendix"]);
    assert_eq!(code, EXIT_OK);
    let fixtures = v["result"]["fixtures"].as_array().unwrap();
    assert_eq!(fixtures.len(), 1);
    assert_eq!(fixtures[0]["name"], "s4-appendix");
}

#[test]
fn corrupted_golden_table_fails() {
    let (code, v) = json(&["verify-paper", "--only", "s3-table", "--inject-corruption", "s3-table"]);
    assert_eq!(code, EXIT_INTERNAL);
    let f = &v["result"]["fixtures"][0];
    assert_eq!(f["name"], "s3-table");
    assert_eq!(f["passed"], false);
    assert_eq!(v["result"]["passed"], false);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["check-length", "S3", "--lengths", "a,b"]).0, EXIT_USAGE);
    assert_eq!(run(&["check-length", "S3", "--lengths", "0,inf,1"]).0, EXIT_USAGE);
    assert_eq!(run(&["chartable", "S3", "--format", "csv"]).0, EXIT_USAGE);
    assert_eq!(run(&["check-length", "S5", "--lengths", "0,1,1,1,1,1,1", "--paper-order"]).0, EXIT_USAGE);
    assert_eq!(run(&["verify-paper", "--only", "nope"]).0, EXIT_USAGE);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verify-paper"));
    assert_eq!(run(&["--version"]).0, EXIT_OK);
}

#[test]
fn domain_errors() {
    let (code, _, err) = run(&["check-length", "S3", "--lengths", "0,1"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("expected 3"));
    assert_eq!(run(&["check-length", "S3", "--lengths", "1,1,2"]).0, EXIT_DOMAIN);
    assert_eq!(run(&["check-length", "S3", "--lengths", "0,-1,2"]).0, EXIT_DOMAIN);
    assert_eq!(run(&["check-length", "Z3", "--lengths", "0,1,2"]).0, EXIT_DOMAIN);
    assert_eq!(run(&["group-info", "S9"]).0, EXIT_DOMAIN);
    assert_eq!(run(&["decompose", "S3", "--lengths", "0,1,2", "--t=-1"]).0, EXIT_DOMAIN);
    assert_eq!(run(&["evolve", "Z2", "--lengths", "0,1", "--t", "1", "--element", "[1]"]).0, EXIT_DOMAIN);
    assert_eq!(run(&["evolve", "Z2", "--lengths", "0,1", "--t", "1", "--element", "{"]).0, EXIT_DOMAIN);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify-paper", "--only", "q8-condition", "--seed", "7"];
    assert_eq!(run(&args).1, run(&args).1);
    let args = ["chartable", "prod(S3,Z3)"];
    assert_eq!(run(&args).1, run(&args).1);
}

#[test]
fn out_writes_a_file() {
    let path = std::env::temp_dir().join(format!("gck-cli-test-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["group-info", "Z4", "--out", p]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["order"], 4);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn binary_reads_seed_from_environment() {
    let bin = env!("CARGO_BIN_EXE_gck");
    let out = Process::new(bin)
        .args(["group-info", "Z2"])
        .env("GCK_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 99);

    let out = Process::new(bin).args(["check-length", "S3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}
