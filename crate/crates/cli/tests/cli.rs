use betashift::{run, EXIT_CHECK_FAILED, EXIT_DOMAIN, EXIT_OK, EXIT_PRECISION, EXIT_USAGE};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("betashift").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn dim_reports_value_and_q() {
    let v = json(&["dim", "--family", "10m1", "--m", "0", "--p", "0.75"]);
    assert!((v["dim"].as_f64().unwrap() - 0.99205).abs() < 1e-4);
    assert!((v["q"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    let exact = json(&["dim", "--m", "0", "--p", "3/4"]);
    assert_eq!(exact["q"], "2/3");
}

#[test]
fn admissible_prints_false() {
    let (code, out, _) = call(&["admissible", "--beta-expansion", "1 1", "--word", "0110"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "false");
}

#[test]
fn shifted_measure_is_exact() {
    let v = json(&["measure", "--beta-expansion", "1 1", "--p", "1/2", "--word", "1", "--shift", "1"]);
    assert_eq!(v["value"], "1/4");
    let (_, out, _) = call(&[
        "measure", "--beta-expansion", "1 1", "--p", "1/2", "--word", "1", "--shift", "1", "--format", "plain",
    ]);
    assert_eq!(out.trim(), "1/4");
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["nonsense"]).0, EXIT_USAGE);
    assert_eq!(call(&["admissible", "--word", "01"]).0, EXIT_USAGE);
    assert_eq!(
        call(&["admissible", "--beta-expansion", "1 1", "--beta", "1.5", "--word", "0"]).0,
        EXIT_USAGE
    );
    assert_eq!(call(&["measure", "--m", "0", "--p", "1.5", "--word", "1"]).0, EXIT_DOMAIN);
    assert_eq!(call(&["full", "--m", "0", "--word", "11"]).0, EXIT_DOMAIN);
    assert_eq!(call(&["cyl", "--m", "0", "--word", "012"]).0, EXIT_DOMAIN);
    assert_eq!(call(&["admissible", "--beta", "2.5", "--word", "0"]).0, EXIT_DOMAIN);
    assert_eq!(call(&["eps1", "--beta-expansion", "1011"]).0, EXIT_DOMAIN);
    assert_eq!(call(&["enumerate", "--m", "0", "--n", "40"]).0, EXIT_PRECISION);
    assert_eq!(call(&["admissible", "--beta", "1.8", "--depth", "8", "--word", "110101010"]).0, EXIT_PRECISION);
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}

#[test]
fn diagnostics_stay_off_stdout() {
    let (code, out, err) = call(&["full", "--m", "0", "--word", "11"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(out.is_empty());
    assert!(err.starts_with("error:"));
}

#[test]
fn word_details() {
    let v = json(&["full", "--m", "1", "--word", "10"]);
    assert_eq!(v["full"], false);
    assert_eq!(v["parry_state"], 2);
    let v = json(&["full", "--m", "0", "--word", "1"]);
    assert_eq!(v["tau"], 2);
    assert_eq!(v["m_index"], 3);
    let v = json(&["cyl", "--m", "0", "--word", "10"]);
    assert!((v["length"].as_f64().unwrap() - 0.381_966_011_250_105).abs() < 1e-12);
}

#[test]
fn counts_csv() {
    let (code, out, _) = call(&["enumerate", "--m", "0", "--n", "5", "--counts", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "n,count\n1,2\n2,3\n3,5\n4,8\n5,13\n");
    let (_, out, _) = call(&["enumerate", "--m", "0", "--n", "3", "--format", "plain"]);
    assert_eq!(out, "000\n001\n010\n100\n101\n");
}

#[test]
fn grid_sweep_csv() {
    let (code, out, _) = call(&["dim", "--m", "1", "--p-grid", "0.5:1:3", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "p,q,dim,entropy");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0.5,,0.0"));
}

#[test]
fn expansions() {
    let v = json(&["expand", "--beta-expansion", "1 1", "--x", "0.5", "--n", "5"]);
    assert_eq!(v["digits"], serde_json::json!([0, 1, 0, 0, 1]));
    let v = json(&["eps1", "--beta-expansion", "1 0 1", "--n", "6"]);
    assert_eq!(v["quasi_digits"], serde_json::json!([1, 0, 0, 1, 0, 0]));
    assert_eq!(v["zero_runs"], serde_json::json!([2, 1, 0, 2, 1, 0]));
    let v = json(&["eps1", "--beta", "3.5", "--n", "4"]);
    assert_eq!(v["expansion_digits"][0], 3);
}

#[test]
fn markov_chain_output() {
    let v = json(&["markov", "--m", "0", "--p", "1/2"]);
    assert_eq!(v["pi"], serde_json::json!(["2/3", "1/3"]));
    assert_eq!(v["trans"], serde_json::json!([["1/2", "1/2"], ["1", "0"]]));
}

#[test]
fn simulation_is_deterministic_across_threads() {
    let args = |t: &'static str| {
        vec!["simulate", "--m", "1", "--q", "0.6", "--n", "20000", "--streams", "8", "--seed", "7", "--threads", t]
    };
    let (c1, a, _) = call(&args("1"));
    let (c4, b, _) = call(&args("4"));
    assert_eq!((c1, c4), (EXIT_OK, EXIT_OK));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["within_4_se"], true);
}

#[test]
fn seed_falls_back_to_environment() {
    let args = ["localdim", "--m", "0", "--p", "0.4", "--depths", "100,1000"];
    std::env::set_var("BETASHIFT_SEED", "123");
    let (_, from_env, _) = call(&args);
    std::env::remove_var("BETASHIFT_SEED");
    let mut explicit = args.to_vec();
    explicit.extend(["--seed", "123"]);
    let (_, from_flag, _) = call(&explicit);
    assert_eq!(from_env, from_flag);
}

#[test]
fn cesaro_flags_non_simple_bases() {
    let (code, out, err) = call(&[
        "shift-measure", "--beta-expansion", "110 per(01)", "--p", "0.5", "--iterations", "200", "--streams", "16",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(err.contains("not simple"));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["hypothesis_violation"], true);
}

#[test]
fn verify_suites() {
    let (code, out, _) = call(&["verify", "--suite", "markov", "--m", "1", "--p", "2/5", "--format", "plain"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().all(|l| l.starts_with("PASS")));
    let (code, out, _) = call(&["verify", "--suite", "combinatorics", "--format", "plain"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let (code, out, _) = call(&["verify", "--suite", "dimension", "--grid", "25", "--format", "plain"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
    let failing: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failing.len(), 1, "{out}");
    assert!(failing[0].contains("entropy gap exceeds 1e-6"));
    assert!(out.contains("PASS dimension/m=0 chain entropy equals dim x log beta"));
}
