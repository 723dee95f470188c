use std::path::PathBuf;
use std::process::{Command, Output};

use entropy_lab_cli::report;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entropy-lab"))
        .args(args)
        .env("ENTROPY_LAB_SEED", "17")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn cell(csv: &str, name: &str, column: usize) -> String {
    csv.lines()
        .find(|l| l.split(',').nth(1) == Some(name))
        .unwrap_or_else(|| panic!("no row {name} in\n{csv}"))
        .split(',')
        .nth(column)
        .unwrap()
        .to_string()
}

#[test]
fn quantum_rel_qubit_pair() {
    let o = run(&["quantum", "rel", "--rho", &data("qubit_07.json"), "--sigma", &data("qubit_05.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = stdout(&o);
    assert_eq!(csv.lines().next(), Some(report::HEADER));
    assert_eq!(csv.lines().count(), 6);
    for route in ["divergence", "limit", "araki", "interpolated"] {
        let v: f64 = cell(&csv, route, 2).parse().unwrap();
        assert!((v - 0.0822828785051).abs() < 1e-6, "{route} {v}");
    }
    assert!(!csv.contains('\r'));
}

#[test]
fn support_violation_is_infinite() {
    let o = run(&[
        "quantum", "rel", "--rho", &data("qubit_05.json"), "--sigma", &data("pure.json"), "--method", "divergence",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(cell(&stdout(&o), "divergence", 2), "inf");
}

#[test]
fn tight_tolerance_is_a_finding() {
    let o = run(&[
        "quantum", "rel", "--rho", &data("qutrit_rotated.json"), "--sigma", &data("qutrit_mixed.json"), "--tol", "1e-300",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("tolerance"));
    assert!(stdout(&o).contains("max_discrepancy"));
}

#[test]
fn usage_and_input_errors_exit_2() {
    let q = data("qubit_05.json");
    for args in [
        vec!["quantum", "rel", "--rho", q.as_str(), "--sigma", q.as_str(), "--method", "bogus"],
        vec!["quantum", "rel", "--rho", "/nonexistent.json", "--sigma", q.as_str()],
        vec!["quantum", "rel", "--rho", q.as_str()],
        vec!["quantum", "rel", "--rho", q.as_str(), "--sigma", q.as_str(), "--unknown"],
        vec!["orlicz", "regular", "--density", q.as_str(), "--eps-grid", "1:2"],
        vec!["quantum", "rel", "--rho", &data("not_hermitian.json"), "--sigma", q.as_str()],
        vec!["orlicz", "regular", "--density", &data("p.csv")],
        vec!["quantum", "rel", "--rho", q.as_str(), "--sigma", q.as_str(), "--out", "/nonexistent/dir/r.csv"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn t_sweep_table() {
    let o = run(&["quantum", "sweep-t", "--rho", &data("qubit_07.json"), "--sigma", &data("qubit_05.json")]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let errors: Vec<f64> = csv
        .lines()
        .filter(|l| l.starts_with("sweep_t,t="))
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(errors.len(), 9);
    assert!(errors.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn regular_entropy_of_trace_vanishes() {
    let o = run(&["orlicz", "regular", "--density", &data("identity2.json"), "--eps-grid", "1e-8:1e2:161"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(csv.lines().filter(|l| l.starts_with("sweep_eps,")).count(), 161);
    let v: f64 = cell(&csv, "regular_entropy", 2).parse().unwrap();
    assert!(v.abs() <= 1e-5);
}

#[test]
fn regular_entropy_diagonal_and_commuting() {
    let o = run(&["orlicz", "regular", "--density", &data("diag_12_08.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = cell(&stdout(&o), "tau_a_log_a", 2).parse().unwrap();
    assert!((v - 0.0201355135507).abs() < 1e-12);

    let o = run(&["orlicz", "regular", "--density", &data("qubit_05.json"), "--sigma", &data("qubit_07.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: f64 = cell(&stdout(&o), "infimum", 2).parse().unwrap();
    assert!((v - 0.0871766935724).abs() < 1e-6);

    let o = run(&["orlicz", "regular", "--density", &data("diag_12_08.json"), "--base", "counting"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classical_reports() {
    let o = run(&["classical", "report", "--energies", &data("two_level.csv")]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(cell(&csv, "h_functional", 2), "-0.582203108888");
    assert_eq!(cell(&csv, "mean_k", 2), "-0.582203108888");

    let o = run(&["classical", "report", "--dist", &data("p.csv"), "--ref", &data("q.csv")]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = cell(&stdout(&o), "kl_characteristic", 2).parse().unwrap();
    assert!((v - 0.0822828785051).abs() < 1e-7);

    let o = run(&["classical", "report", "--dist", &data("uniform4.csv"), "--ref", &data("uniform4.csv")]);
    assert_eq!(cell(&stdout(&o), "kl", 2), "0");
}

#[test]
fn orlicz_norm_and_crossed_tail() {
    let o = run(&["orlicz", "norm", "--dist", &data("indicator.csv")]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = cell(&stdout(&o), "luxemburg_norm[psi_log]", 2).parse().unwrap();
    assert!((v - 1.20699564216).abs() < 1e-10);

    let o = run(&["crossed", "tail", "--density", &data("qubit_07.json"), "--eps-grid", "0.5:0.5:1", "--base", "counting"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(cell(&stdout(&o), "eps=0.5", 2), "2");

    let o = run(&["crossed", "tail", "--density", &data("qubit_07.json"), "--profile", "phi-log", "--shift", "-0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn out_file_matches_stdout_and_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let args = ["quantum", "rel", "--rho", &data("qubit_07.json"), "--sigma", &data("qubit_05.json"), "--format", "json"];
    let o = run(&args);
    let mut with_out = args.to_vec();
    let p = path.to_string_lossy().into_owned();
    with_out.extend(["--out", p.as_str()]);
    assert_eq!(run(&with_out).status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&o));
    let rows = report::from_json(&written).unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(report::to_json(&rows), written);
}

#[test]
fn selftest_depends_only_on_seed() {
    let a = run(&["selftest", "--pairs", "3"]);
    let b = run(&["selftest", "--pairs", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("seed=17"));
    let c = Command::new(env!("CARGO_BIN_EXE_entropy-lab"))
        .args(["selftest", "--pairs", "3"])
        .env("ENTROPY_LAB_SEED", "nope")
        .output()
        .unwrap();
    assert_eq!(c.status.code(), Some(2));
}
