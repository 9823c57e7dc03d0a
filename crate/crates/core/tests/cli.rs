use std::path::Path;
use std::process::{Command, Output};

use teleqcp::chains::{correlator_provider, ModelSpec, Strategy, ThermalPoint};
use teleqcp::teleport::{d_min, f_max};

fn teleqcp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_teleqcp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scan_to(out: &Path) -> Output {
    teleqcp(&[
        "scan",
        "--model",
        "xy",
        "--gamma",
        "0.5",
        "--lambda-range",
        "0.5:1.5",
        "--step",
        "0.05",
        "--kt",
        "0.1",
        "--kt",
        "0.2",
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn scan_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert!(scan_to(&a).status.success());
    assert!(scan_to(&b).status.success());
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn scan_csv_round_trips_against_library() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    assert!(scan_to(&path).status.success());
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(headers.len(), 14);
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let get = |name: &str| rec[col(name)].parse::<f64>().unwrap();
        let model = ModelSpec::xy(get("param"), 0.5).unwrap();
        let point = ThermalPoint::new(model, get("kT")).unwrap();
        let c = correlator_provider(&point, Strategy::FreeFermion).unwrap().correlators;
        for (name, v) in [("z", c.z()), ("xx", c.xx()), ("yy", c.yy()), ("zz", c.zz())] {
            assert!((get(name) - v).abs() < 1e-12, "{name}: {} vs {v}", get(name));
        }
        assert!((get("Fmax") - f_max(&c).value).abs() < 1e-12);
        assert!((get("Dmin") - d_min(&c).value).abs() < 1e-12);
        rows += 1;
    }
    assert_eq!(rows, 2 * 21);
}

#[test]
fn empty_range_is_a_usage_error_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("none.csv");
    let out = teleqcp(&[
        "scan",
        "--model",
        "xy",
        "--gamma",
        "0",
        "--lambda-range",
        "2:1",
        "--kt",
        "0.1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!path.exists());
}

#[test]
fn detection_needs_three_temperatures() {
    let out = teleqcp(&["detect", "--preset", "xy-gamma0", "--kt", "0.05", "--kt", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 3"));
}

#[test]
fn detect_writes_extrema_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let out = teleqcp(&[
        "detect",
        "--preset",
        "xy-gamma0",
        "--kt",
        "0.05",
        "--kt",
        "0.1",
        "--kt",
        "0.2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let extrema = std::fs::read_to_string(&path).unwrap();
    assert_eq!(extrema.lines().count(), 4);
    let summary = std::fs::read_to_string(dir.path().join("d.csv.summary")).unwrap();
    assert!(summary.contains("extrapolated"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[model]\nkind = \"xy\"\ngamma = 1.0\nlambda = 0.5\n[scan]\nkt = [0.3]\nprovider = \"ff\"\n",
    )
    .unwrap();
    let out = teleqcp(&["correlators", "--config", cfg.to_str().unwrap(), "--lambda", "1.5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').take(5).map(|v| v.parse().unwrap()).collect();
    let point = ThermalPoint::new(ModelSpec::xy(1.5, 1.0).unwrap(), 0.3).unwrap();
    let c = correlator_provider(&point, Strategy::FreeFermion).unwrap().correlators;
    assert_eq!(row[0], 0.3);
    assert!((row[1] - c.z()).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(teleqcp(&["--help"]).status.code(), Some(0));
    assert_eq!(teleqcp(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(teleqcp(&["scan", "--preset", "nope"]).status.code(), Some(1));
    assert_eq!(teleqcp(&["verify", "quick"]).status.code(), Some(0));
}

#[test]
fn gamma_scan_reports_isotropic_point() {
    let out = teleqcp(&["detect", "--preset", "xy-lambda1.5", "--step", "0.1", "--kt", "0.1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(&row[1..], &[0.0, 0.0]);
}
