use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;
use tsbound::cli::run;
use tsbound::codes::load_spectrum;

fn call(args: &[&str]) -> i32 {
    run(std::iter::once("tsbound").chain(args.iter().copied()).map(Into::into))
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_str().unwrap().to_owned()
}

#[test]
fn spectrum_of_hamming_code() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "h.json");
    assert_eq!(call(&["spectrum", "--builtin", "hamming74", "--out", s(&out)]), 0);
    let spec = load_spectrum(&out).unwrap();
    assert_eq!(spec.n(), 7);
    assert_eq!(spec.d_min(), 3);
    assert!((spec.log_a()[3] - 7f64.ln()).abs() < 1e-15);
    assert!((spec.log_a()[4] - 7f64.ln()).abs() < 1e-15);
    assert_eq!(spec.log_a()[7], 0.0);
}

#[test]
fn generator_file_matches_builtin() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.json"), path(&dir, "b.json"));
    assert_eq!(call(&["spectrum", "--generator", &data("golay23.txt"), "--out", s(&a)]), 0);
    assert_eq!(call(&["spectrum", "--builtin", "golay23", "--out", s(&b)]), 0);
    assert_eq!(read(&a), read(&b));
}

#[test]
fn malformed_generator_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "bad.txt");
    std::fs::write(&g, "2 4\n1010\n01x1\n").unwrap();
    assert_eq!(call(&["spectrum", "--generator", s(&g), "--out", s(&path(&dir, "o.json"))]), 2);
}

#[test]
fn spectrum_file_and_generator_give_the_same_bound() {
    let dir = TempDir::new().unwrap();
    let spec = path(&dir, "h.json");
    assert_eq!(call(&["spectrum", "--builtin", "hamming74", "--out", s(&spec)]), 0);
    let (a, b) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    assert_eq!(call(&["bounds", "--builtin", "hamming74", "--snr", "1:3:1", "--bounds", "tsb", "--out", s(&a)]), 0);
    assert_eq!(call(&["bounds", "--spectrum", s(&spec), "--snr", "1:3:1", "--bounds", "tsb", "--out", s(&b)]), 0);
    assert_eq!(read(&a), read(&b));
    let text = read(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eb_n0_db,c,tsb,log_tsb"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn bounds_csv_is_deterministic_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    let args = |out: &Path, threads: &'static str| {
        vec!["bounds", "--builtin", "hamming74", "--snr", "0:4:2", "--bounds", "tsb,itsb,ahp,psi,tsb-bit", "--threads", threads, "--out"]
            .into_iter()
            .map(String::from)
            .chain(std::iter::once(s(out).to_owned()))
            .collect::<Vec<_>>()
    };
    let one = args(&a, "1");
    let two = args(&b, "2");
    assert_eq!(call(&one.iter().map(String::as_str).collect::<Vec<_>>()), 0);
    assert_eq!(call(&two.iter().map(String::as_str).collect::<Vec<_>>()), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn empty_bound_list_is_rejected() {
    assert_eq!(call(&["bounds", "--builtin", "hamming74", "--snr", "1", "--bounds", ""]), 2);
    assert_eq!(call(&["bounds", "--builtin", "hamming74", "--snr", "1"]), 2);
}

#[test]
fn bad_grids_are_rejected() {
    assert_eq!(call(&["bounds", "--builtin", "hamming74", "--snr", "3:1:1", "--bounds", "tsb"]), 2);
    assert_eq!(call(&["bounds", "--builtin", "hamming74", "--snr", "1:3:0", "--bounds", "tsb"]), 2);
    assert_eq!(call(&["exponent", "--rate", "0.5", "--grid", "-1"]), 2);
}

#[test]
fn exponent_single_point() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "e.csv");
    assert_eq!(call(&["exponent", "--rate", "0.5", "--grid", "0.625", "--out", s(&out)]), 0);
    let text = read(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "inv_eb_n0,e_ub,e_tsb,e_rce,delta_star");
    let row: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    // c = 0.5 / 0.625 = 0.8
    assert!((row[2] - 0.016882).abs() < 1e-5, "{row:?}");
    assert!(row[1] <= row[2] && row[2] <= row[3] + 1e-6);
}

#[test]
fn simulation_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.json"), path(&dir, "b.json"));
    for out in [&a, &b] {
        assert_eq!(call(&["simulate", "--builtin", "hamming74", "--snr", "3", "--trials", "20000", "--seed", "5", "--out", s(out)]), 0);
    }
    assert_eq!(read(&a), read(&b));
    let v: serde_json::Value = serde_json::from_str(&read(&a)).unwrap();
    assert_eq!(v["estimate"]["trials"], 20000);
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["config"]["transmit"], "all-zero");
}

#[test]
fn simulation_rejects_too_few_trials() {
    assert_eq!(call(&["simulate", "--builtin", "hamming74", "--snr", "3", "--trials", "0"]), 2);
}

#[test]
fn binary_reports_usage_errors_through_exit_status() {
    let bin = env!("CARGO_BIN_EXE_tsbound");
    let status = Command::new(bin).args(["bounds", "--snr", "1", "--bounds", "tsb"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
    assert!(!status.stderr.is_empty());
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
