use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entbound"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn family_file(dims: &str, name: &str, params: &str) -> String {
    format!(
        r#"{{"format":"entbound-stateset/1","dims":{dims},"states":[{{"label":"x","kind":"family","data":{{"name":"{name}","params":{params}}}}}]}}"#
    )
}

fn run(args: &[&str], input: Option<&Path>) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    if let Some(p) = input {
        cmd.arg(p);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Column `name` of the first data row.
fn field(csv: &str, name: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    row[i].to_string()
}

fn real(csv: &str, name: &str) -> f64 {
    field(csv, name).parse().unwrap()
}

fn footer(csv: &str, key: &str) -> String {
    csv.lines()
        .find(|l| l.split(',').next() == Some(key))
        .unwrap_or_else(|| panic!("no footer row {key}"))
        .split(',')
        .nth(1)
        .unwrap()
        .to_string()
}

#[test]
fn measure_ghz3_family() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "ghz.json",
        &family_file("[2,2,2]", "ghz", r#"{"m":3}"#),
    );
    let o = run(&["measure"], Some(&p));
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!((real(&csv, "gLower") - 1.0).abs() <= 1e-5);
    assert!((real(&csv, "gUpper") - 1.0).abs() <= 1e-5);
    assert_eq!(field(&csv, "chain"), "ok");
}

#[test]
fn measure_w4_family() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "w.json", &family_file("[2,2,2,2]", "w", r#"{"m":4}"#));
    let o = run(&["measure"], Some(&p));
    assert_eq!(o.status.code(), Some(0));
    let g = real(&stdout(&o), "gUpper");
    assert!((g - (64.0f64 / 27.0).log2()).abs() <= 1e-6);
}

#[test]
fn non_normalized_state_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "bad.json",
        r#"{"format":"entbound-stateset/1","dims":[2,2],"states":[{"kind":"pure","data":[[1,0],[1,0],[0,0],[0,0]]}]}"#,
    );
    let o = run(&["measure"], Some(&p));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("states[0].data"));
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_file_is_an_input_error() {
    let o = run(&["bound", "/nonexistent/set.json"], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn non_convergence_exits_2_with_rows() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "ghz.json",
        &family_file("[2,2,2]", "ghz", r#"{"m":3}"#),
    );
    let o = run(&["measure", "--max-iter", "1"], Some(&p));
    assert_eq!(o.status.code(), Some(2));
    let csv = stdout(&o);
    assert_eq!(field(&csv, "overlapStatus"), "maxIterReached");
}

#[test]
fn bound_on_bell_basis() {
    let dir = TempDir::new().unwrap();
    let states: Vec<String> = (0..4)
        .map(|i| {
            format!(r#"{{"kind":"family","data":{{"name":"bell","params":{{"index":{i}}}}}}}"#)
        })
        .collect();
    let text = format!(
        r#"{{"format":"entbound-stateset/1","dims":[2,2],"states":[{}]}}"#,
        states.join(",")
    );
    let p = write(&dir, "bell.json", &text);
    let o = run(&["bound"], Some(&p));
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(footer(&csv, "theorem1"), "provablyNotDiscriminable");
    let sum: f64 = footer(&csv, "sumDPpt").parse().unwrap();
    assert!((sum - 8.0).abs() < 1e-3);
}

#[test]
fn bound_on_ghz_set() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "set.json",
        &family_file("[2,2,2]", "ghz_set", r#"{"m":3}"#),
    );
    let o = run(&["bound"], Some(&p));
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(footer(&csv, "N"), "4");
    assert_eq!(footer(&csv, "theorem1"), "inconclusive");
    assert_eq!(footer(&csv, "saturated"), "true");
    assert_eq!(footer(&csv, "nBound[d_ppt]"), "4");
    let sum: f64 = footer(&csv, "sumDPpt").parse().unwrap();
    assert!((sum - 8.0).abs() < 4e-3);
}

#[test]
fn bound_on_single_product_state() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "prod.json",
        r#"{"format":"entbound-stateset/1","dims":[2,2],"states":[{"kind":"pure","data":[[0,0],[1,0],[0,0],[0,0]]}]}"#,
    );
    let o = run(&["bound"], Some(&p));
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!((real(&csv, "dPpt") - 1.0).abs() < 1e-5);
    assert_eq!(footer(&csv, "nBound[d_ppt]"), "4");
}

#[test]
fn oversized_sets_are_rejected() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "big.json",
        &family_file("[2,2,2,2,2,2,2]", "ghz", r#"{"m":7}"#),
    );
    let o = run(&["measure"], Some(&p));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_examples() {
    let o = run(&["sweep", "--count", "0", "--dims", "2,2"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);

    let o = run(
        &["sweep", "--count", "100", "--dims", "2,2", "--seed", "7"],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(csv.lines().count(), 101);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",ok")));

    let o = run(&["sweep", "--count", "10", "--dims", "2,2,2"], None);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert_eq!(csv.lines().count(), 11);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",ok")));
}

#[test]
fn sweep_is_byte_identical_and_plots() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let svg = dir.path().join("chain.svg");
    for (out, plot) in [(&a, Some(&svg)), (&b, None)] {
        let mut args = vec![
            "sweep",
            "--count",
            "8",
            "--dims",
            "2,3",
            "--seed",
            "3",
            "--out",
            out.to_str().unwrap(),
        ];
        if let Some(p) = plot {
            args.extend(["--plot", p.to_str().unwrap()]);
        }
        assert_eq!(run(&args, None).status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let svg = std::fs::read_to_string(svg).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<circle").count(), 24);
}

#[test]
fn sweep_input_errors() {
    assert_eq!(
        run(&["sweep", "--count", "1", "--dims", "2,3,3"], None)
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["sweep", "--count", "1", "--dims", "2,x"], None)
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["sweep", "--dims", "2,2"], None).status.code(),
        Some(1)
    );
    assert_eq!(run(&["--help"], None).status.code(), Some(0));
}

#[test]
fn demo_exit_codes() {
    let o = run(&["demo", "bell", "--d", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("N <= 3"));
    assert_eq!(
        run(&["demo", "ghz", "--m", "11"], None).status.code(),
        Some(1)
    );
    assert_eq!(run(&["demo", "w", "--m", "1"], None).status.code(), Some(1));
    assert_eq!(
        run(&["demo", "ghz-sim", "--m", "10"], None).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["demo", "entangled-basis"], None).status.code(),
        Some(0)
    );
}
