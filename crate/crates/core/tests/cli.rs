use std::process::{Command, Output};

use polcorr::report::{parse_csv, JsonReport, CSV_HEADER};
use polcorr::{predict_table, Angle64, ModelKind, SourceConfig64};

fn polcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polcorr"))
        .args(args)
        .output()
        .expect("spawn polcorr")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn default_invocation_is_figure1_scan() {
    let bare = polcorr(&[]);
    let scan = polcorr(&["scan"]);
    assert!(bare.status.success());
    assert_eq!(bare.stdout, scan.stdout);
    assert_eq!(
        stdout(&scan),
        include_str!("golden/figure1_classical.csv")
    );
}

#[test]
fn csv_round_trips_analytic_values() {
    let o = polcorr(&["scan", "--model", "quantum-plus"]);
    let rows = parse_csv(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 1086);
    let src = SourceConfig64::default();
    for r in rows {
        let t = predict_table(
            ModelKind::QUANTUM_PLUS,
            Angle64::new(r.theta1_rad).unwrap(),
            Angle64::new(r.theta2_rad).unwrap(),
            &src,
        );
        for (got, want) in [r.p_vv, r.p_vh, r.p_hv, r.p_hh].iter().zip(t.cells()) {
            assert!((got - want).abs() <= 1e-10);
        }
    }
}

#[test]
fn json_output_matches_csv() {
    let csv = polcorr(&["scan", "--theta1", "0.1,-0.4", "--theta2-range", "0:3:31"]);
    let json = polcorr(&["scan", "--theta1", "0.1,-0.4", "--theta2-range", "0:3:31", "--format", "json"]);
    let from_csv = parse_csv(&stdout(&csv)).unwrap();
    let report: JsonReport = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(report.spec.steps, 31);
    assert_eq!(report.rows.len(), from_csv.len());
    for (j, c) in report.rows.iter().zip(&from_csv) {
        assert!((j.p_vv - c.p_vv).abs() <= 1e-11);
        assert!((j.chi - c.chi).abs() <= 1e-11);
    }
}

#[test]
fn degrees_flag_converts_inputs() {
    let deg = polcorr(&["--degrees", "scan", "--theta1", "45", "--theta2-range", "0:90:3"]);
    let rad = polcorr(&[
        "scan",
        "--theta1",
        "0.7853981633974483",
        "--theta2-range",
        "0:1.5707963267948966:3",
    ]);
    assert!(deg.status.success());
    assert_eq!(deg.stdout, rad.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    let o = polcorr(&["scan", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with(CSV_HEADER));
    assert_eq!(text.lines().count(), 1087);
}

#[test]
fn mc_single_point_quantum() {
    let o = polcorr(&[
        "mc", "--model", "quantum-minus", "--theta1", "0", "--theta2", "1.5707963", "--trials",
        "1000000", "--seed", "42",
    ]);
    assert!(o.status.success());
    let rows = parse_csv(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 1);
    assert!((rows[0].p_vv - 0.5).abs() <= 0.002);
}

#[test]
fn mc_is_reproducible_and_chunk_independent() {
    let args = ["mc", "--theta1", "0.3", "--theta2-range", "0:3:4", "--trials", "50000", "--seed", "9"];
    let a = polcorr(&[&args[..], &["--chunks", "1"]].concat());
    let b = polcorr(&[&args[..], &["--chunks", "8"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn chsh_grid_report() {
    let o = polcorr(&["chsh", "--model", "classical", "--grid-step", "0.0491"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("s: 2.000000000\n"));
    let o = polcorr(&["chsh", "--model", "quantum-minus", "--grid-step", "0.39269908169872414"]);
    assert!(stdout(&o).contains("s: 2.828427125\n"));
    assert!(stdout(&o).contains("exceeds_2: true"));
}

#[test]
fn chsh_fixed_settings() {
    let o = polcorr(&[
        "--degrees", "chsh", "--model", "quantum-minus", "--settings", "0,45,22.5,67.5",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("s: 2.828427125\n"));
}

#[test]
fn visibility_subcommand() {
    let o = polcorr(&["visibility", "--theta1", "0,0.7853981633974483"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("classical,0,1,"));
    let v: f64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
    assert!(v.abs() < 1e-9);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["frobnicate"][..],
        &["scan", "--no-such-flag"],
        &["scan", "--model", "bohmian"],
        &["scan", "--theta2-range", "0:1"],
        &["chsh", "--settings", "0,1"],
    ] {
        let o = polcorr(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn runtime_errors_exit_1() {
    for args in [
        &["chsh", "--grid-step", "1.0"][..],
        &["scan", "--theta2-range", "1:0:10"],
        &["scan", "--mode-weight", "2"],
        &["mc", "--trials", "0"],
    ] {
        let o = polcorr(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("domain error"));
    }
}
