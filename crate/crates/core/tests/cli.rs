use std::process::Command;

use ffdiag::cli::{run_command, Outcome, EXIT_DOMAIN, EXIT_OK, EXIT_PRECISION, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> Outcome {
    let mut argv = vec!["ffdiag".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run_command(&argv)
}

fn report(o: &Outcome) -> Value {
    assert_eq!(o.code, EXIT_OK, "stderr: {}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

fn temp_file(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("ffdiag-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn paperfold_example() {
    let o = run(&["paperfold", "--p", "3", "--m-level", "1", "--count", "8"]);
    assert_eq!(o.code, EXIT_OK);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert!(lines[0].starts_with("# config="));
    assert_eq!(lines[1], "0,0,1,0,0,1,1,0");
    let j = report(&run(&["paperfold", "--p", "5", "--count", "4", "--format", "json"]));
    assert_eq!(j["config"]["m"], 2);
    assert_eq!(j["report"], serde_json::json!([0, 0, 1, 0]));
}

#[test]
fn beta_example() {
    let j = report(&run(&["beta", "--p", "3", "--prec", "3"]));
    assert_eq!(j["report"]["series"]["coeffs"], serde_json::json!([1, 2, 1]));
    assert_eq!(j["report"]["series"]["start"], 0);
    assert_eq!(j["config"]["prec"], 3);
}

#[test]
fn score_example_with_alpha_file() {
    let f = temp_file("tinv.json", r#"{"p":3,"orientation":"tinv","start":1,"prec":8,"coeffs":[1,0,0,0,0,0,0]}"#);
    let path = f.to_str().unwrap();
    let args = [
        "score", "--p", "3", "--m-level", "auto", "--deg-max", "0", "--shift-max", "1", "--prec", "8", "--alpha-file", path,
    ];
    let j = report(&run(&args));
    assert_eq!(j["report"]["verdict"], "zero-to-precision");
    assert_eq!(j["report"]["witnesses"], serde_json::json!([{"n": [1], "k": 1}]));
    assert_eq!(j["config"]["deg_max"], 0);
    assert_eq!(j["config"]["shift_max"], 1);
    assert_eq!(j["config"]["alpha_file"], path);
}

#[test]
fn score_default_alpha_is_paperfolding() {
    let j = report(&run(&["score", "--deg-max", "2", "--shift-max", "3"]));
    assert_eq!(j["config"]["m_level"], "auto");
    assert_eq!(j["config"]["m"], 1);
    assert_eq!(j["report"]["verdict"], "score");
    assert!(j["report"]["score_exp"].as_i64().unwrap() < 0);
}

#[test]
fn trajectory_csv_shape() {
    let o = run(&["trajectory", "--grid", "4"]);
    assert_eq!(o.code, EXIT_OK);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert!(lines[0].starts_with("# config="));
    assert_eq!(lines[1], "m,n,height_exp");
    assert_eq!(lines.len(), 2 + 15 + 1);
    assert!(lines.last().unwrap().starts_with("# min_exp="));
    for row in &lines[2..17] {
        assert_eq!(row.split(',').count(), 3);
    }
}

#[test]
fn dfao_eval_and_christol() {
    let f = temp_file(
        "aut.json",
        r#"{"q":3,"states":3,"initial":0,"transitions":[[0,2,2],[1,2,2],[2,2,2]],"output":[0,1,0]}"#,
    );
    let path = f.to_str().unwrap();
    for (n, want) in [(0, "0"), (1, "1"), (9, "1"), (10, "0"), (81, "1")] {
        let o = run(&["dfao", "eval", "--file", path, "--n", &n.to_string()]);
        assert_eq!(o.code, EXIT_OK);
        assert_eq!(o.stdout.trim(), want);
    }
    let o = run(&["dfao", "christol", "--count", "10"]);
    assert_eq!(o.stdout.lines().nth(1), Some("0,1,0,1,0,0,0,0,0,1"));
}

#[test]
fn embed_reports_residuals() {
    for check in ["gamma", "hom", "membership", "conjugation"] {
        let j = report(&run(&["embed", "--check", check, "--p", "5", "--samples", "4", "--seed", "3"]));
        assert_eq!(j["report"]["all_passed"], true, "{check}");
        assert_eq!(j["report"]["results"].as_array().unwrap().len(), 4);
        assert!(j["report"]["results"][0]["residual_exp"].is_i64());
        assert_eq!(j["config"]["seed"], 3);
    }
}

#[test]
fn consistency_report() {
    let j = report(&run(&["consistency", "--grid", "6", "--deg-max", "3", "--shift-max", "8", "--samples", "50"]));
    assert_eq!(j["report"]["agree"], true);
    assert_eq!(j["report"]["height_side_dominates"], true);
    assert_eq!(j["report"]["case_a"]["samples"], 50);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--no-such-flag"]).code, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(run(&["score", "--format", "csv"]).code, EXIT_USAGE);
    let help = run(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("trajectory"));
    assert_eq!(run(&["--version"]).code, EXIT_OK);
    assert_eq!(run(&["beta", "--p", "9"]).code, EXIT_DOMAIN);
    assert_eq!(run(&["paperfold", "--m-level", "0"]).code, EXIT_DOMAIN);
    assert_eq!(run(&["dfao", "eval", "--file", "/nonexistent/aut.json", "--n", "1"]).code, EXIT_DOMAIN);
    let o = run(&["trajectory", "--grid", "10", "--prec", "12"]);
    assert_eq!(o.code, EXIT_PRECISION);
    assert!(o.stderr.contains("precision"));
    assert_eq!(run(&["score", "--deg-max", "4", "--shift-max", "4", "--prec", "6"]).code, EXIT_PRECISION);
    assert_eq!(run(&["embed", "--check", "hom", "--prec", "4"]).code, EXIT_PRECISION);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("ffdiag-out-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let o = run(&["trajectory", "--grid", "2", "--out", p]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("m,n,height_exp"));
    assert!(written.contains(&format!("\"output_path\":\"{p}\"")));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn seeded_output_is_reproducible() {
    let a = run(&["embed", "--check", "hom", "--samples", "3", "--seed", "42"]);
    let b = run(&["embed", "--check", "hom", "--samples", "3", "--seed", "42"]);
    assert_eq!(a, b);
    let c = run(&["consistency", "--grid", "4", "--deg-max", "2", "--shift-max", "4", "--samples", "30", "--threads", "1"]);
    let d = run(&["consistency", "--grid", "4", "--deg-max", "2", "--shift-max", "4", "--samples", "30", "--threads", "3"]);
    assert_eq!(c, d);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ffdiag");
    let ok = Command::new(bin).args(["paperfold", "--count", "3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8(ok.stdout).unwrap().ends_with("0,0,1\n"));
    let usage = Command::new(bin).arg("--bogus").output().unwrap();
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));
    assert!(!usage.stderr.is_empty());
    let prec = Command::new(bin).args(["trajectory", "--grid", "5", "--prec", "3"]).output().unwrap();
    assert_eq!(prec.status.code(), Some(EXIT_PRECISION));
}
