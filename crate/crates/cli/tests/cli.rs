//! End-to-end behavior of the `secrecy` binary and its library entry points.

use std::path::PathBuf;
use std::process::{Command, Output};

use hybrid_secrecy::config::load_config;
use hybrid_secrecy::mc::simulate_metrics;
use secrecy_cli::{exit, load_settings, run_validate, CliError};
use serde_json::Value;

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(format!("{name}.json"))
}

fn secrecy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secrecy")).args(args).output().expect("spawn secrecy")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Manifest JSON and CSV records of one output.
fn parse(text: &str) -> (Value, Vec<csv::StringRecord>) {
    let (first, rest) = text.split_once('\n').expect("manifest line");
    let manifest = serde_json::from_str(first.strip_prefix("# ").expect("manifest prefix")).unwrap();
    let mut r = csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).from_reader(rest.as_bytes());
    (manifest, r.records().map(Result::unwrap).collect())
}

fn eval_value(config: &str, metric: &str, extra: &[&str]) -> f64 {
    let path = config_path(config);
    let mut args = vec!["eval", "--config", path.to_str().unwrap(), "--metric", metric];
    args.extend_from_slice(extra);
    let o = secrecy(&args);
    assert_eq!(o.status.code(), Some(exit::OK), "{}", String::from_utf8_lossy(&o.stderr));
    let (_, rows) = parse(&stdout(&o));
    assert_eq!(&rows[0][0], "metric");
    rows[1][2].parse().unwrap()
}

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    std::io::Write::write_all(&mut f, contents.as_bytes()).unwrap();
    f
}

#[test]
fn eval_emits_manifest_and_stable_header() {
    let path = config_path("sop_vs_psi_q");
    let o = secrecy(&["eval", "--config", path.to_str().unwrap(), "--metric", "sop"]);
    assert_eq!(o.status.code(), Some(0));
    let (m, rows) = parse(&stdout(&o));
    assert_eq!(m["command"], "eval");
    assert_eq!(m["config_sha256"].as_str().unwrap().len(), 64);
    assert!(m["timestamp"].is_string());
    assert!(m["policy"]["series_tolerance"].is_number());
    let header: Vec<&str> = rows[0].iter().collect();
    assert_eq!(header, ["metric", "scenario", "value", "route", "evaluations", "error_bound", "clamped"]);
    assert_eq!(&rows[1][0], "sop");
    assert_eq!(&rows[1][1], "1");
    assert_eq!(&rows[1][3], "closed-form");
}

/// The interference-only and double-constraint reference configs reproduce their
/// Monte-Carlo goldens within three standard errors.
#[test]
fn eval_reproduces_monte_carlo_goldens() {
    for (name, seed) in [("sop_vs_psi_q", 41), ("sop_vs_psi_t", 42)] {
        let analytic = eval_value(name, "sop", &[]);
        let cfg = load_config(&config_path(name)).unwrap().secrecy;
        let g = simulate_metrics(&cfg, 1_000_000, seed).unwrap()["SOP_L"];
        assert!(g.z_score(analytic).abs() <= 3.0, "{name}: {analytic} vs {g:?}");
    }
}

#[test]
fn zero_rate_throughput_is_zero() {
    assert_eq!(eval_value("est_vs_psi_q", "est", &["--set", "target_rate=0"]), 0.0);
}

#[test]
fn spsc_complements_zero_rate_bound_across_invocations() {
    for name in ["sop_vs_psi_q", "sop_vs_psi_t"] {
        let spsc = eval_value(name, "spsc", &[]);
        let sop0 = eval_value(name, "sop", &["--set", "target_rate=0"]);
        assert_eq!(spsc, 1.0 - sop0, "{name}");
    }
}

#[test]
fn scenario_flag_overrides_config() {
    let path = config_path("sop_vs_psi_t");
    let o = secrecy(&["eval", "--config", path.to_str().unwrap(), "--metric", "sop", "--scenario", "1"]);
    let (m, rows) = parse(&stdout(&o));
    assert_eq!(&rows[1][1], "1");
    assert_eq!(m["config"]["scenario"], 1);
}

#[test]
fn invalid_configs_exit_with_usage_code() {
    let base = std::fs::read_to_string(config_path("sop_vs_psi_q")).unwrap();
    let mut v: serde_json::Map<String, Value> = serde_json::from_str(&base).unwrap();
    v.insert("mu_r".into(), Value::from(2.5));
    let f = write_temp(&Value::Object(v.clone()).to_string());
    let o = secrecy(&["eval", "--config", f.path().to_str().unwrap(), "--metric", "sop"]);
    assert_eq!(o.status.code(), Some(exit::USAGE));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("[config]") && err.contains("mu_r must be a positive integer"), "{err}");

    v.insert("mu_r".into(), Value::from(2));
    v.insert("colour".into(), Value::from(1));
    let f = write_temp(&Value::Object(v).to_string());
    let o = secrecy(&["eval", "--config", f.path().to_str().unwrap(), "--metric", "sop"]);
    assert_eq!(o.status.code(), Some(exit::USAGE));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));

    let f = write_temp("{\n  \"alpha_r\": 2,\n  oops\n}");
    let o = secrecy(&["eval", "--config", f.path().to_str().unwrap(), "--metric", "sop"]);
    assert_eq!(o.status.code(), Some(exit::USAGE));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let o = secrecy(&["eval", "--config", "/nonexistent/config.json", "--metric", "sop"]);
    assert_eq!(o.status.code(), Some(exit::USAGE));
}

#[test]
fn argument_errors_and_help() {
    assert_eq!(secrecy(&["--help"]).status.code(), Some(exit::OK));
    assert_eq!(secrecy(&["--version"]).status.code(), Some(exit::OK));
    assert_eq!(secrecy(&["eval"]).status.code(), Some(exit::USAGE));
    assert_eq!(secrecy(&["frobnicate"]).status.code(), Some(exit::USAGE));
    let path = config_path("sop_vs_psi_q");
    let p = path.to_str().unwrap();
    assert_eq!(secrecy(&["eval", "--config", p, "--metric", "sop", "--tolerance", "0.5"]).status.code(), Some(exit::USAGE));
    let o = secrecy(&["sweep", "--config", p, "--axis", "psi_q_db", "--from", "0", "--to", "1", "--points", "1"]);
    assert_eq!(o.status.code(), Some(exit::USAGE));
    let o = secrecy(&["sweep", "--config", p, "--axis", "fso.colour", "--from", "0", "--to", "1", "--points", "2"]);
    assert_eq!(o.status.code(), Some(exit::USAGE));
}

#[test]
fn numerical_failures_map_to_their_own_code() {
    let e = CliError::Model(hybrid_secrecy::Error::Integrity { what: "cdf".into(), value: 1.5 });
    assert_eq!(e.exit_code(), exit::NUMERICAL);
    assert_eq!(e.category(), "numerical");
    let e = CliError::Model(hybrid_secrecy::Error::Convergence { what: "series".into(), last: 0.0, previous: 1.0 });
    assert_eq!(e.exit_code(), exit::NUMERICAL);
}

#[test]
fn sweep_rows_are_ordered_and_monotone() {
    let path = config_path("sop_vs_psi_q");
    let o = secrecy(&[
        "sweep", "--config", path.to_str().unwrap(), "--axis", "psi_q_db", "--from", "-10", "--to", "20", "--points",
        "16", "--metrics", "sop,est",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (m, rows) = parse(&stdout(&o));
    assert_eq!(m["command"], "sweep");
    let header: Vec<&str> = rows[0].iter().collect();
    assert_eq!(
        header,
        [
            "psi_q_db", "sop", "sop_route", "sop_evaluations", "sop_error_bound", "sop_error", "est", "est_route",
            "est_evaluations", "est_error_bound", "est_error"
        ]
    );
    let xs: Vec<f64> = rows[1..].iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(xs.len(), 16);
    assert_eq!((xs[0], xs[15]), (-10.0, 20.0));
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
    let sop: Vec<f64> = rows[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(sop.windows(2).all(|w| w[1] <= w[0]), "{sop:?}");
    assert!(rows[1..].iter().all(|r| r[5].is_empty() && r[10].is_empty()));
}

#[test]
fn sweep_records_point_failures_in_row() {
    let path = config_path("sop_vs_psi_q");
    let o = secrecy(&["sweep", "--config", path.to_str().unwrap(), "--axis", "mu_r", "--from", "1", "--to", "2.5", "--points", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let (_, rows) = parse(&stdout(&o));
    let body = &rows[1..];
    assert_eq!(body.len(), 4);
    for (r, ok) in body.iter().zip([true, false, true, false]) {
        assert_eq!(r[1].is_empty(), !ok, "{r:?}");
        assert_eq!(r[5].is_empty(), ok, "{r:?}");
    }
    assert!(body[1][5].starts_with("config:"), "{:?}", body[1]);
}

/// Rows of a sweep whose metric does not depend on the axis are equal.
#[test]
fn constant_metric_sweep_gives_equal_rows() {
    let path = config_path("sop_vs_psi_q");
    let p = path.to_str().unwrap();
    let o = secrecy(&[
        "sweep", "--config", p, "--axis", "psi_q_db", "--from", "0", "--to", "10", "--points", "2", "--metrics", "est",
        "--set", "target_rate=0",
    ]);
    let (_, rows) = parse(&stdout(&o));
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[1][1], "0");
    assert_eq!(rows[1].iter().skip(1).collect::<Vec<_>>(), rows[2].iter().skip(1).collect::<Vec<_>>());

    let o = secrecy(&["sweep", "--config", p, "--axis", "psi_t_db", "--from", "0", "--to", "30", "--points", "2"]);
    let (_, rows) = parse(&stdout(&o));
    assert_eq!(rows[1].iter().skip(1).collect::<Vec<_>>(), rows[2].iter().skip(1).collect::<Vec<_>>());
}

/// The worker count changes scheduling only; CSV bodies are identical.
#[test]
fn sweep_output_does_not_depend_on_worker_count() {
    let path = config_path("sop_vs_phi_r");
    let run = |workers: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_secrecy"))
            .env("SECRECY_WORKERS", workers)
            .args(["sweep", "--config", path.to_str().unwrap(), "--axis", "phi_r_db", "--from", "0", "--to", "30"])
            .args(["--points", "7", "--metrics", "sop,spsc"])
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        text.split_once('\n').unwrap().1.to_string()
    };
    assert_eq!(run("1"), run("4"));
    let o = Command::new(env!("CARGO_BIN_EXE_secrecy")).env("SECRECY_WORKERS", "0").arg("--help").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn validate_refuses_small_samples() {
    let path = config_path("sop_vs_psi_q");
    let o = secrecy(&["validate", "--config", path.to_str().unwrap(), "--samples", "1000"]);
    assert_eq!(o.status.code(), Some(exit::USAGE));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[usage]"));
}

#[test]
fn validate_report_is_reproducible_and_written_to_file() {
    let path = config_path("sop_vs_psi_t");
    let dir = tempfile::tempdir().unwrap();
    let run = |file: &str| {
        let out = dir.path().join(file);
        let o = secrecy(&[
            "validate", "--config", path.to_str().unwrap(), "--samples", "20000", "--seed", "3", "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(exit::OK), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(out).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let (m, rows) = parse(&text);
    assert_eq!(m["seed"], 3);
    assert_eq!(m["samples"], 20000);
    assert!(m.get("timestamp").is_none());
    let header: Vec<&str> = rows[0].iter().collect();
    assert_eq!(header, ["check", "analytic", "estimate", "std_error", "statistic", "limit", "status"]);
    let names: Vec<&str> = rows[1..].iter().map(|r| r.get(0).unwrap()).collect();
    assert_eq!(names, ["sop", "spsc", "est", "ks_rf_sr", "ks_rf_sp", "ks_rf_se", "ks_fso", "ks_rf_relay", "ks_hybrid"]);
    assert!(text.trim_end().ends_with("# result: PASS"));
}

/// Raising Φ_e by 10 dB on the analytic side only is caught.
#[test]
fn corrupted_eavesdropper_snr_fails_validation() {
    let path = config_path("sop_vs_psi_q");
    let honest = load_settings(&path, &[], None).unwrap();
    let phi_e = honest.raw["phi_e_db"].as_f64().unwrap();
    let corrupted = load_settings(&path, &[format!("phi_e_db={}", phi_e + 10.0)], None).unwrap();
    let report = run_validate(&corrupted, &honest, 100_000, 9).unwrap();
    assert!(!report.passed());
    let sop = report.check("sop").unwrap();
    assert!(sop.statistic.abs() > 30.0, "{}", sop.statistic);
    assert!(report.failures().contains(&"sop"));
    let mut out = Vec::new();
    report.write(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.trim_end().lines().last().unwrap().starts_with("# result: FAIL (sop"), "{text}");
}

#[test]
fn sample_dump_has_requested_rows() {
    let path = config_path("pointing_error");
    let dir = tempfile::tempdir().unwrap();
    for channel in ["alpha-mu", "malaga"] {
        let out = dir.path().join(format!("{channel}.csv"));
        let o = secrecy(&[
            "sample", "--channel", channel, "--config", path.to_str().unwrap(), "--n", "500", "--seed", "4", "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let (m, rows) = parse(&std::fs::read_to_string(out).unwrap());
        assert_eq!(m["command"], "sample");
        assert_eq!(&rows[0][0], "gamma");
        assert_eq!(rows.len(), 501);
        assert!(rows[1..].iter().all(|r| r[0].parse::<f64>().unwrap() >= 0.0));
    }
}
