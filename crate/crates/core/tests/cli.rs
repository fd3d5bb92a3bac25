use std::fs;
use std::process::{Command, Output};

use majorant_lab::montecarlo::check_chernoff;
use majorant_lab::randsets::{RandomSetModel, SeededRng};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_majorant-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn gen_writes_one_integer_per_line_deterministically() {
    let args = ["gen", "--model", "bernoulli", "--n", "1000", "--delta", "0.5", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let values: Vec<i64> = text.lines().map(|l| l.parse().unwrap()).collect();
    let expected = RandomSetModel::BernoulliSelector { n: 1000, delta: 0.5 }
        .sample(SeededRng::new(7, 0))
        .unwrap();
    assert_eq!(values, expected.iter().map(|v| v[0]).collect::<Vec<_>>());
}

#[test]
fn norm_of_a_set_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("S.txt");
    fs::write(&path, "1\n2\n3\n").unwrap();
    let out = run(&["norm", "--set-file", path.to_str().unwrap(), "--p", "4", "--method", "exact-even"]);
    let v = stdout_json(&out);
    assert_eq!(v["method"], "even_convolution");
    assert_eq!(v["rel_error_estimate"], 0.0);
    assert!((v["value"].as_f64().unwrap() - 19f64.powf(0.25)).abs() < 1e-12);
    assert_eq!(v["spec_echo"]["config"]["p"], 4.0);
}

#[test]
fn chernoff_matches_in_process_run() {
    let out = run(&["experiment", "--name", "chernoff", "--n", "4096", "--delta", "0.5", "--trials", "2000", "--seed", "1"]);
    let v = stdout_json(&out);
    let model = RandomSetModel::BernoulliSelector { n: 4096, delta: 0.5 };
    let direct = check_chernoff(&model, 2000, 1).unwrap();
    assert_eq!(v["empirical_probability"].as_f64().unwrap(), direct.empirical_probability);
    assert_eq!(v["per_trial"].as_array().unwrap().len(), 2000);
    assert!(v["runtime_seconds"].is_null());
}

#[test]
fn validation_errors_exit_2_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.json");
    let out = run(&[
        "experiment", "--name", "chernoff", "--n", "4096", "--delta", "1.5", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("delta"));
    assert!(!out_path.exists());

    let out = run(&["experiment", "--name", "chernoff", "--n", "64", "--delta", "0.9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["experiment", "--name", "chernoff", "--n", "4096", "--delta", "0.5", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trials"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--n", "ten"]).status.code(), Some(2));
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# sampler\nmodel = bernoulli\nn = 1000\ndelta = 0.5 # tau = 1/sqrt(N)\nseed = 3\n").unwrap();
    let from_file = run(&["gen", "--config", cfg.to_str().unwrap(), "--seed", "7"]);
    let direct = run(&["gen", "--model", "bernoulli", "--n", "1000", "--delta", "0.5", "--seed", "7"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, direct.stdout);

    let json = stdout_json(&run(&["gen", "--config", cfg.to_str().unwrap(), "--format", "json"]));
    assert_eq!(json["spec_echo"]["config"]["seed"], 3);

    fs::write(&cfg, "model = bernoulli\nwidth = 3\n").unwrap();
    let out = run(&["gen", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("width"));

    fs::write(&cfg, "model = bernoulli\nn = many\n").unwrap();
    assert_eq!(run(&["gen", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn runtime_failures_exit_1() {
    // Dense cube for p = 8 over [1, 10^7] is far beyond the convolution budget.
    let out = run(&["norm", "--model", "full", "--n", "10000000", "--p", "8", "--method", "exact-even"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["experiment", "--name", "lower-bound-pap", "--l", "8", "--s", "4", "--a", "12", "--b", "3", "--p", "4", "--trials", "30", "--format", "csv"];
    let one = bin().args(args).env("MAJORANT_LAB_THREADS", "1").output().unwrap();
    let all = bin().args(args).env("MAJORANT_LAB_THREADS", "0").output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, all.stdout);
    assert!(String::from_utf8_lossy(&one.stdout).starts_with("trial,seed_stream,statistic_value,norm_method,grid\n"));
    let bad = bin().args(args).env("MAJORANT_LAB_THREADS", "lots").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn every_named_experiment_runs() {
    let cases: [&[&str]; 7] = [
        &["--name", "chernoff", "--n", "256", "--delta", "0.5"],
        &["--name", "lower-bound-product", "--n", "64", "--delta", "0.5", "--p", "4", "--kind", "parabola"],
        &["--name", "lower-bound-pap", "--l", "8", "--s", "2", "--a", "6", "--b", "3", "--p", "6"],
        &["--name", "selector-moment", "--n", "64", "--l", "8", "--q", "3"],
        &["--name", "majorant-scaling", "--model", "bernoulli", "--delta", "0.5", "--ns", "32,64,128", "--p", "4", "--restarts", "2"],
        &["--name", "probability", "--model", "bernoulli", "--n", "64", "--delta", "0.4", "--p", "3", "--thresholds", "1.0,1.1,1.5", "--restarts", "2"],
        &["--name", "lambda-expectation", "--model", "block", "--n", "64", "--l", "8", "--p", "4", "--restarts", "2"],
    ];
    for case in cases {
        let mut args = vec!["experiment", "--trials", "5", "--timing"];
        args.extend_from_slice(case);
        let v = stdout_json(&run(&args));
        assert_eq!(v["spec_echo"]["command"], "experiment", "{case:?}");
        assert!(v["runtime_seconds"].is_number(), "{case:?}");
    }
}

#[test]
fn optimizer_commands() {
    let majorant = stdout_json(&run(&["majorant", "--model", "full", "--n", "3", "--p", "4", "--restarts", "3"]));
    assert!((majorant["value"].as_f64().unwrap() - 19f64.powf(0.25)).abs() < 1e-9);
    assert!((majorant["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let lambda = stdout_json(&run(&["lambdap", "--model", "full", "--n", "2", "--p", "4"]));
    assert!((lambda["value"].as_f64().unwrap() - 1.5f64.powf(0.25)).abs() < 1e-6);
    assert_eq!(lambda["flags"][0], "lower_estimate");
}
