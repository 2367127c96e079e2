//! The binary end to end: outputs and exit codes.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperkernel")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn index_reports_both_counts() {
    let out = run(&["index", "--a", "-1.5", "--plane"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["class"], "positive-pontryagin");
    assert_eq!(v["neg_index"], 1);
    assert_eq!(v["pos_index"], "infinite");
    assert_eq!(v["agree"], true);

    let v = json(&run(&["index", "--a", "1", "--b", "2", "--disk"]));
    assert_eq!(v["class"], "hilbert");
}

#[test]
fn gfun_eval_matches_exponential() {
    let v = json(&run(&["gfun-eval", "--b", "0.5", "--x", "1", "--x", "4"]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let x = num(&row["x"]);
        assert!((num(&row["value"]) - x.sqrt() * (-x).exp()).abs() < 1e-12);
    }
}

#[test]
fn mellin_check_exit_codes() {
    let ok = run(&["mellin-check", "--a", "2.5", "--b", "0.5"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(json(&ok).as_array().unwrap().iter().all(|r| r["pass"] == true));
    let strict = run(&["mellin-check", "--b", "0", "--b", "0.5", "--tol", "0"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn topology_of_fock_space() {
    let v = json(&run(&["topology", "--b", "1:1"]));
    assert_eq!((num(&v["alpha"]), num(&v["mu"]), num(&v["nu"])), (0.5, 1.0, 1.0));
    assert_eq!(v["model"], "mittag-leffler");
}

#[test]
fn kernel_eval_fock_exponential() {
    let v = json(&run(&["kernel-eval", "--grid", "0.5:0,1:1", "--u", "1:0"]));
    for row in v.as_array().unwrap() {
        let (zr, zi) = (num(&row["re_z"]), num(&row["im_z"]));
        let want = num_complex::Complex64::new(zr, zi).exp();
        assert!((num(&row["re_k"]) - want.re).abs() < 1e-12 && (num(&row["im_k"]) - want.im).abs() < 1e-12);
    }
}

#[test]
fn verify_single_row_and_failure() {
    let out = run(&["verify", "--only", "monomial-laguerre"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)[0]["pass"], true);
    assert_eq!(run(&["verify", "--only", "key", "--tol", "1e-30"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--only", "no-such-identity"]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["index", "--a", "-2", "--plane"]).status.code(), Some(2));
    assert_eq!(run(&["topology", "--b", "-1:1"]).status.code(), Some(2));
    assert_eq!(run(&["gfun-eval", "--b", "0.5", "--x", "abc"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

fn continue_with(csv: &str, extra: &[&str]) -> Output {
    let mut args = vec!["continue", "--alpha", "2", "--nu", "0.5", "--input", "-", "--grid", "0.5:0,1:0.5"];
    args.extend_from_slice(extra);
    let mut child = Command::new(env!("CARGO_BIN_EXE_hyperkernel"))
        .args(&args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(csv.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn continue_constant_data() {
    let csv: String = std::iter::once("t,re\n".to_string()).chain((1..=1200).map(|i| format!("{},1\n", i as f64 * 0.05))).collect();
    let out = continue_with(&csv, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
    let headers: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(headers, ["re_z", "im_z", "re_f", "im_f", "err_est"]);
    for rec in rd.records() {
        let rec = rec.unwrap();
        let re: f64 = rec[2].parse().unwrap();
        let im: f64 = rec[3].parse().unwrap();
        assert!((re - 1.0).abs() < 1e-3 && im.abs() < 1e-3, "{rec:?}");
    }
    let crit: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(crit["finite"], true);
}

#[test]
fn continue_refuses_growing_data() {
    let csv: String =
        std::iter::once("t,re\n".to_string()).chain((1..=1000).map(|i| format!("{},{}\n", i as f64 * 0.04, (i as f64 * 0.04).exp()))).collect();
    let path = std::env::temp_dir().join(format!("hyperkernel-cli-{}.criterion.json", std::process::id()));
    let out = continue_with(&csv, &["--criterion", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
    let crit: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(crit["finite"], false);
}

#[test]
fn continue_rejects_empty_input() {
    assert_eq!(continue_with("t,re\n", &[]).status.code(), Some(2));
}
