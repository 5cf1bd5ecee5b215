use std::fs;
use std::process::{Command, Output};

use symroof_cli::record::{Format, OutputRecord};

fn symroof(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symroof"))
        .args(args)
        .env_remove("SYMROOF_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn eval_roof_examples() {
    let o = symroof(&["eval-roof", "--family", "werner", "--a", "0.75", "--monotone", "vidal:1"]);
    assert_eq!(o.status.code(), Some(0));
    let expected = 0.5 - (0.75f64 * 0.25).sqrt();
    let line = stdout(&o).lines().find(|l| l.starts_with("value")).unwrap().to_string();
    let value: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((value - expected).abs() < 1e-15);

    let o = symroof(&["eval-roof", "--family", "iso", "--b", "0.4", "--d", "5", "--monotone", "vidal:2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value      0.0000000000000000e0"));
}

#[test]
fn region_c_is_a_domain_error() {
    let o = symroof(&["eval-roof", "--family", "oo", "--a", "0.7", "--b", "0.3", "--d", "3", "--monotone", "entropy"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("region C"), "{}", stderr(&o));
}

#[test]
fn eval_witness_examples() {
    let cases = [
        (vec!["--lambda", "0.5,0.5", "--target", "werner:0.9"], "Go"),
        (vec!["--lambda", "0.6,0.3,0.1", "--target", "iso:0.95", "--d", "3"], "NoGo"),
        (vec!["--lambda", "1,0", "--target", "werner:0.75"], "NoGo"),
    ];
    for (args, verdict) in cases {
        let mut full = vec!["eval-witness"];
        full.extend(args);
        let o = symroof(&full);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        let line = out.lines().find(|l| l.starts_with("verdict")).unwrap();
        assert_eq!(line.split_whitespace().nth(1), Some(verdict), "{out}");
    }
}

#[test]
fn lambda_normalization_flag() {
    let o = symroof(&["eval-witness", "--lambda", "3,1", "--target", "werner:0.9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--normalize"));
    let o = symroof(&["eval-witness", "--lambda", "3,1", "--target", "werner:0.9", "--normalize"]);
    assert_eq!(o.status.code(), Some(0));
    let o = symroof(&["eval-witness", "--lambda", "0.5,x", "--target", "werner:0.9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn argument_errors_exit_with_2() {
    assert_eq!(symroof(&["eval-roof", "--family", "iso", "--monotone", "entropy"]).status.code(), Some(2));
    assert_eq!(symroof(&["eval-roof", "--family", "werner", "--a", "1.5", "--monotone", "entropy"]).status.code(), Some(2));
    assert_eq!(symroof(&["eval-roof", "--family", "werner", "--a", "0.7", "--monotone", "tangle"]).status.code(), Some(2));
    assert_eq!(symroof(&["emit-figure", "nonsense"]).status.code(), Some(2));
    assert_eq!(symroof(&["verify", "medium"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let o = symroof(&["emit-figure", "vidal-iso", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn help_documents_exit_codes() {
    let o = symroof(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for code in ["0  success", "1  verification failure", "2  domain or argument error", "3  I/O error"] {
        assert!(text.contains(code), "{text}");
    }
}

#[test]
fn figure_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (name, file, format) in [
        ("vidal-iso", "v.csv", Format::Csv),
        ("t-opt", "t.csv", Format::Csv),
        ("oo-vidal-surface", "s.json", Format::Json),
    ] {
        let path = dir.path().join(file);
        let o = symroof(&["emit-figure", name, "--d", "5", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let text = fs::read_to_string(&path).unwrap();
        let record = OutputRecord::decode(&text, format).unwrap();
        assert_eq!(record.schema, "symroof/1");
        assert_eq!(record.encode(format).unwrap(), text);
        assert_eq!(OutputRecord::decode(&record.encode(format).unwrap(), format).unwrap(), record);
    }
}

#[test]
fn vidal_iso_figure_has_four_curves_at_d5() {
    let o = symroof(&["emit-figure", "vidal-iso", "--d", "5"]);
    let record = OutputRecord::from_csv(&stdout(&o)).unwrap();
    let names: Vec<&str> = record.columns.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["b", "E1", "E2", "E3", "E4"]);
    assert_eq!(record.rows(), 201);
    let b = &record.columns[0].values;
    assert_eq!((b[0], b[200]), (0.0, 1.0));
}

#[test]
fn figures_are_deterministic() {
    let a = symroof(&["emit-figure", "t-opt", "--d", "4"]);
    let b = symroof(&["emit-figure", "t-opt", "--d", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn witness_curve_reports_its_crossing_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_symroof"))
        .args(["emit-figure", "witness-curve", "--d", "3", "--lambda", "0.6,0.3,0.1", "--points", "41"])
        .args(["--out", path.to_str().unwrap()])
        .env("SYMROOF_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let record = OutputRecord::from_csv(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(record.metadata["seed"], "5");
    let crossing: f64 = record.metadata["crossing"].parse().unwrap();
    assert!((0.890..=0.900).contains(&crossing), "{crossing}");
}

#[test]
fn eval_records_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("roof.json");
    let o = symroof(&["eval-roof", "--family", "oo", "--a", "0.8", "--b", "0.1", "--d", "3", "--monotone", "entropy", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let record = OutputRecord::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(record.metadata["region"], "werner-orbit");
    assert_eq!(record.columns[0].name, "value");
    let printed = stdout(&o);
    let line = printed.lines().find(|l| l.starts_with("value")).unwrap();
    let value: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert_eq!(record.columns[0].values[0], value);
}

#[test]
fn verify_fast_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let a = symroof(&["verify", "fast", "--seed", "7", "--out", path.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let b = symroof(&["verify", "fast", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["schema"], "symroof/1");
    assert_eq!(report["passed"], true);
    assert_eq!(report["seed"], 7);
}
