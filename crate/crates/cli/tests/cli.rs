use std::path::Path;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn delsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delsub"))
        .args(args)
        .args(["--threads", "2"])
        .output()
        .expect("binary runs")
}

fn schema(name: &str) -> JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::compile(&value).expect("schema compiles")
}

/// Runs a command expecting JSON on stdout valid under `name`.
fn json(name: &str, args: &[&str], code: i32) -> Value {
    let out = delsub(args);
    assert_eq!(out.status.code(), Some(code), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    let s = schema(name);
    if let Err(errors) = s.validate(&v) {
        panic!("{name}: {:?}", errors.map(|e| e.to_string()).collect::<Vec<_>>());
    }
    v
}

fn error_kind(args: &[&str]) -> String {
    let out = delsub(args);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert!(schema("error").is_valid(&v));
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn trivial_deletion_ball() {
    let v = json("ball", &["ball", "--q", "2", "--x", "01", "--t", "1", "--s", "0"], 0);
    assert_eq!(v["size"], 2);
    assert_eq!(v["words"], serde_json::json!(["0", "1"]));
}

#[test]
fn ball_size_matches_listing() {
    let v = json("ball", &["ball", "--q", "2", "--x", "01010111"], 0);
    assert_eq!(v["size"].as_u64().unwrap() as usize, v["words"].as_array().unwrap().len());
}

#[test]
fn over_budget_ball_is_a_structured_error() {
    let kind = error_kind(&["ball", "--q", "4", "--x", "0123012301230123", "--t", "3", "--s", "3", "--budget", "1000"]);
    assert_eq!(kind, "budget_exceeded");
}

#[test]
fn tight_pairs_agree_across_methods() {
    let v = json(
        "intersect",
        &["intersect", "--q", "3", "--x", "01201010101010101", "--y", "10201010101010101", "--mode", "both"],
        0,
    );
    assert_eq!(v["size"], 91);
    assert_eq!(v["agree"], true);
    let v = json(
        "intersect",
        &["intersect", "--q", "2", "--x", "01010101010101010101010101010", "--y", "10010101010101010101010101010", "--mode", "both"],
        0,
    );
    assert_eq!(v["size"], 107);
    assert_eq!(v["fast"]["bound"], 107);
}

#[test]
fn distance_one_falls_back_to_oracle() {
    let v = json("intersect", &["intersect", "--q", "2", "--x", "0110", "--y", "0111"], 0);
    assert_eq!(v["fast"]["method"], "oracle");
    assert_eq!(v["fast"]["bound_applicable"], false);
}

#[test]
fn length_mismatch_is_reported() {
    assert_eq!(error_kind(&["intersect", "--q", "2", "--x", "0110", "--y", "011"]), "length_mismatch");
    assert_eq!(error_kind(&["intersect", "--q", "2", "--x", "0120", "--y", "0110"]), "symbol_out_of_range");
    assert_eq!(error_kind(&["intersect", "--q", "2", "--x", "0a10", "--y", "0110"]), "parse");
}

#[test]
fn exhaustive_claims_pass() {
    let v = json("verify", &["verify", "--scope", "claims", "--q", "2", "--n", "8", "--exhaustive", "--quiet"], 0);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["exhaustive"], true);
}

#[test]
fn sampled_theorem_has_no_violations() {
    let v = json(
        "verify",
        &["verify", "--scope", "theorem", "--q", "3", "--n", "17", "--samples", "100000", "--seed", "7", "--quiet"],
        0,
    );
    assert_eq!(v["violations"], 0);
    assert_eq!(v["max_size"], 91);
    assert_eq!(v["seed"], 7);
}

#[test]
fn sampled_far_pairs_stay_small() {
    let v = json(
        "verify",
        &["verify", "--scope", "remark5", "--q", "2", "--n", "29", "--samples", "10000", "--seed", "7", "--quiet"],
        0,
    );
    assert!(v["max_size"].as_u64().unwrap() <= 40);
    assert_eq!(v["bound"], 40);
}

#[test]
fn verify_progress_goes_to_stderr() {
    let out = delsub(&["verify", "--scope", "lemmas", "--q", "2", "--n", "6", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("100%"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(schema("verify").is_valid(&v));
}

#[test]
fn verify_domain_errors() {
    assert_eq!(error_kind(&["verify", "--scope", "theorem", "--q", "2", "--n", "28", "--samples", "5", "--seed", "1"]), "below_threshold");
    assert_eq!(error_kind(&["verify", "--scope", "claims", "--q", "3", "--n", "20", "--exhaustive"]), "budget_exceeded");
    let out = delsub(&["verify", "--scope", "claims", "--q", "2", "--n", "8", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn required_reads_values() {
    let v = json("required_reads", &["required-reads", "--q", "3", "--n", "17"], 0);
    assert_eq!(v["required_reads"], 92);
    let v = json("required_reads", &["required-reads", "--q", "2", "--n", "29"], 0);
    assert_eq!(v["required_reads"], 108);
    assert_eq!(error_kind(&["required-reads", "--q", "2", "--n", "28"]), "below_threshold");
}

#[test]
fn simulation_at_required_reads_always_succeeds() {
    let args = ["simulate", "--q", "2", "--n", "29", "--trials", "100", "--seed", "11", "--quiet"];
    let v = json("simulate", &args, 0);
    let row = &v["rows"][0];
    assert_eq!(row["reads"], 108);
    assert_eq!(row["success_rate"], 1.0);
    assert_eq!(json("simulate", &args, 0), v);
}

#[test]
fn single_read_on_an_ambiguous_pair() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.txt");
    std::fs::write(&path, "# tight pair\n01201010\n10201010\n").unwrap();
    let v = json(
        "simulate",
        &["simulate", "--q", "3", "--codebook", path.to_str().unwrap(), "--reads", "1,2", "--trials", "200", "--seed", "3", "--quiet"],
        0,
    );
    let rate = v["rows"][0]["success_rate"].as_f64().unwrap();
    assert!(rate < 1.0);
    assert_eq!(v["rows"][0]["unique_wrong"], 0);
}

#[test]
fn codebook_errors() {
    assert_eq!(error_kind(&["simulate", "--q", "2", "--codebook", "/nonexistent/code.txt", "--seed", "1", "--reads", "3"]), "io");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.txt");
    std::fs::write(&path, "0101\n0101\n").unwrap();
    assert_eq!(error_kind(&["coverage", "--q", "2", "--codebook", path.to_str().unwrap()]), "duplicate_codeword");
    assert_eq!(error_kind(&["coverage", "--q", "2", "--n", "29"]), "budget_exceeded");
}

#[test]
fn coverage_of_small_parity_code() {
    let v = json("coverage", &["coverage", "--q", "2", "--n", "8"], 0);
    assert_eq!(v["exhaustive"], true);
    assert_eq!(v["codebook_size"], "128");
    let sampled = json("coverage", &["coverage", "--q", "2", "--n", "29", "--samples", "2000", "--seed", "4"], 0);
    assert_eq!(sampled["exhaustive"], false);
    assert!(sampled["note"].is_string());
    assert!(sampled["coverage"].as_u64().unwrap() <= 107);
}

#[test]
fn decode_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let code = dir.path().join("code.txt");
    std::fs::write(&code, "0110100\n1001011\n").unwrap();
    let reads = dir.path().join("reads.txt");
    std::fs::write(&reads, "110100\n010100\n110100\n").unwrap();
    let v = json("decode", &["decode", "--q", "2", "--codebook", code.to_str().unwrap(), "--reads-file", reads.to_str().unwrap()], 0);
    assert_eq!(v["outcome"], "unique");
    assert_eq!(v["codeword"], "0110100");
    assert_eq!((v["raw_reads"].as_u64(), v["distinct_reads"].as_u64()), (Some(3), Some(2)));
    let v = json("decode", &["decode", "--q", "2", "--codebook", code.to_str().unwrap(), "--read", "000000"], 0);
    assert_eq!(v["outcome"], "infeasible");
    let v = json("decode", &["decode", "--q", "2", "--n", "8", "--read", "0110100"], 0);
    assert_eq!(v["outcome"], "ambiguous");
}

#[test]
fn csv_and_plain_formats() {
    let out = delsub(&["required-reads", "--q", "2", "--n", "29", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "q,n,threshold,max_intersection,required_reads\n2,29,29,107,108\n");
    let out = delsub(&["intersect", "--q", "2", "--x", "0110", "--y", "0110", "--format", "plain"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("|B(x) ∩ B(y)| = "));
    let out = delsub(&["required-reads", "--q", "2", "--n", "3", "--format", "plain"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error: "));
}

#[test]
fn randomized_commands_need_a_seed() {
    let out = delsub(&["simulate", "--q", "2", "--n", "29"]);
    assert_eq!(out.status.code(), Some(2));
}
