use std::io::Write;
use std::process::{Command, Output};

use robust_median::{alpha_star, contamination_tolerance, min_coverage, select_k, Tolerance};
use serde_json::Value;
use tempfile::NamedTempFile;

const BIN: &str = env!("CARGO_BIN_EXE_robust-median");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("ROBUST_MEDIAN_SEED").output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn one_to(n: usize) -> NamedTempFile {
    data_file(&(1..=n).map(|i| format!("{i}\n")).collect::<String>())
}

fn json(args: &[&str]) -> Value {
    let mut args = args.to_vec();
    args.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&run(&args))).unwrap()
}

#[test]
fn interval_report() {
    let f = one_to(20);
    let path = f.path().to_str().unwrap();
    let v = json(&["interval", "--data", path, "--alpha", "0.05", "--eps", "0.10"]);
    assert_eq!(v["k"], 5);
    assert_eq!(v["lower"], 6.0);
    assert_eq!(v["upper"], 15.0);
    assert_eq!(v["min_coverage"].as_f64().unwrap(), min_coverage(20, 5, 0.10).unwrap());
    assert!(v["convention"].as_str().unwrap().contains("half-open"));

    let text = stdout(&run(&["interval", "--data", path, "--eps", "0.1"]));
    assert!(text.contains("[6, 15)"));
    assert!(text.contains("0.938232"));
}

#[test]
fn data_file_conventions() {
    let f = data_file("\u{feff}# header comment\n3.5\n\n-1,ignored\n2e1\n  7 \n");
    let v = json(&["interval", "--data", f.path().to_str().unwrap(), "--eps", "0"]);
    assert_eq!(v["n"], 4);
}

#[test]
fn test_report_and_tolerance() {
    // 17 of 20 observations above theta0 = 3.5.
    let f = one_to(20);
    let path = f.path().to_str().unwrap();
    let v = json(&["test", "--data", path, "--theta0", "3.5", "--alpha", "0.05", "--eps", "0.05"]);
    assert_eq!(v["statistic"], 17);
    assert_eq!(v["r_n"], 3);
    assert_eq!(v["reject"], true);
    let Tolerance::Value { tau } = contamination_tolerance(20, 17, 0.05).unwrap() else { panic!() };
    assert_eq!(v["tolerance"]["status"], "value");
    assert_eq!(v["tolerance"]["tau"].as_f64().unwrap(), tau);

    let v = json(&["test", "--data", path, "--theta0", "10.5", "--eps", "0.05"]);
    assert_eq!(v["reject"], false);
    assert_eq!(v["tolerance"]["status"], "not_significant_even_clean");

    let v = json(&["test", "--data", path, "--theta0", "-3"]);
    assert_eq!(v["tolerance"]["status"], "capped_at_half");

    let v = json(&["test", "--data", path, "--theta0", "10"]);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
    assert!(v["warnings"][0].as_str().unwrap().contains("tie"));

    let v = json(&["tolerance", "--n", "20", "--t", "17"]);
    assert_eq!(v["tolerance"]["tau"].as_f64().unwrap(), tau);
    let v2 = json(&["tolerance", "--data", path, "--theta0", "3.5"]);
    assert_eq!(v, v2);
}

#[test]
fn coverage_and_length_reports() {
    let v = json(&["coverage", "--n", "100", "--k", "39", "--eps", "0.05"]);
    assert_eq!(v["alpha_star"].as_f64().unwrap(), alpha_star(100, 39, 0.05).unwrap());

    let v = json(&["length", "--dist", "normal", "--eps", "0.1", "--delta", "0.1"]);
    assert!((v["max_asymptotic_length"]["value"].as_f64().unwrap() - 0.282).abs() < 5e-4);
    let v = json(&["length", "--dist", "laplace", "--eps", "0.1", "--delta", "0.46"]);
    assert_eq!(v["max_asymptotic_length"]["kind"], "unbounded");
}

#[test]
fn csv_round_trips_library_values() {
    let out = stdout(&run(&["coverage", "--n", "20", "--k", "5", "--eps", "0.05", "--format", "csv"]));
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let rec = rdr.records().next().unwrap().unwrap();
    assert_eq!(rec[4].parse::<f64>().unwrap(), min_coverage(20, 5, 0.05).unwrap());

    let out = stdout(&run(&["table", "--which", "1", "--format", "csv"]));
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["alpha_target", "n", "eps", "k", "alpha_classical", "min_coverage"]
    );
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 56);
    for r in rows {
        let (alpha, n, eps, k): (f64, u64, f64, u64) =
            (r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap(), r[3].parse().unwrap());
        assert_eq!(select_k(n, alpha, 0.0).unwrap().k, k);
        assert_eq!(r[5].parse::<f64>().unwrap(), min_coverage(n, k, eps).unwrap());
    }
}

#[test]
fn golden_outputs() {
    let cases: [(&[&str], &str); 3] = [
        (
            &["coverage", "--n", "20", "--k", "5", "--eps", "0.05", "--format", "csv"],
            include_str!("golden/coverage_n20_k5.csv"),
        ),
        (&["table", "--which", "4", "--format", "csv"], include_str!("golden/table4.csv")),
        (
            &["table", "--which", "2", "--n-grid", "20,40", "--reps", "200", "--seed", "1", "--format", "csv"],
            include_str!("golden/table2_small.csv"),
        ),
    ];
    for (args, want) in cases {
        assert_eq!(stdout(&run(args)), want, "{args:?}");
    }
}

#[test]
fn simulation_output_is_reproducible() {
    let base = ["table", "--which", "3", "--n-grid", "20,60", "--reps", "300", "--format", "csv"];
    let a = stdout(&run(&base));
    let b = stdout(&run(&base));
    assert_eq!(a, b);
    let mut one = base.to_vec();
    one.extend(["--workers", "1"]);
    assert_eq!(stdout(&run(&one)), a);

    let seeded = Command::new(BIN).args(base).env("ROBUST_MEDIAN_SEED", "77").output().unwrap();
    let mut explicit = base.to_vec();
    explicit.extend(["--seed", "77"]);
    assert_eq!(stdout(&seeded), stdout(&run(&explicit)));
    assert_ne!(stdout(&seeded), a);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["table", "--which", "5"]), 2);
    assert_eq!(code(&["interval"]), 2);
    assert_eq!(code(&["bogus"]), 2);

    let empty = data_file("");
    assert_eq!(code(&["interval", "--data", empty.path().to_str().unwrap()]), 3);
    let single = data_file("4.2\n");
    assert_eq!(code(&["interval", "--data", single.path().to_str().unwrap()]), 3);
    let bad = data_file("1\nabc\n");
    let out = run(&["interval", "--data", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(code(&["interval", "--data", "/nonexistent/file.txt"]), 3);

    assert_eq!(code(&["coverage", "--n", "20", "--k", "10", "--eps", "0.05"]), 4);
    assert_eq!(code(&["coverage", "--n", "20", "--k", "5", "--eps", "0.5"]), 4);
    let f = one_to(10);
    assert_eq!(code(&["interval", "--data", f.path().to_str().unwrap(), "--alpha", "1.5"]), 4);
}
