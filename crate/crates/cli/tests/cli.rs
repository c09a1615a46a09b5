use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fockppt::states::{tmsv, MixtureSpec, ThreeModeSpec};
use fockppt::{CMatrix, Complex64, GaussianOperator};
use tempfile::TempDir;

fn fockppt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockppt"))
        .args(args)
        .env_remove("FOCKPPT_CONFIG")
        .output()
        .unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn write_state(dir: &TempDir, name: &str, g: &GaussianOperator) -> PathBuf {
    write(dir, name, &serde_json::to_string(g).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn diag(values: &[f64]) -> CMatrix {
    CMatrix::from_fn(values.len(), values.len(), |i, j| {
        Complex64::new(if i == j { values[i] } else { 0.0 }, 0.0)
    })
}

#[test]
fn ppt_on_tmsv() {
    let dir = TempDir::new().unwrap();
    let f = write_state(&dir, "tmsv.json", &tmsv(0.5).unwrap());
    let out = fockppt(&["ppt", "--state", s(&f), "--partition", "0|1"]);
    assert_eq!(out.status.code(), Some(10));
    let report = json(&out);
    assert_eq!(report["semantics"], "InseparableAndDistillable");
    assert_eq!(report["is_npt"], true);
    let expected = -1.0 - 0.5f64.tanh();
    assert!((report["min_b_eigenvalue"].as_f64().unwrap() - expected).abs() < 1e-12);

    let f0 = write_state(&dir, "vac.json", &tmsv(0.0).unwrap());
    let out = fockppt(&["ppt", "--state", s(&f0), "--partition", "0|1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["semantics"], "SeparableByOneModeTheorem");
}

#[test]
fn ppt_error_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\"num_modes\": 2,");
    assert_eq!(
        fockppt(&["ppt", "--state", s(&bad), "--partition", "0|1"])
            .status
            .code(),
        Some(64)
    );

    let f = write_state(&dir, "tmsv.json", &tmsv(0.5).unwrap());
    for p in ["0|0", "0,1|", "0|2", "01"] {
        assert_eq!(
            fockppt(&["ppt", "--state", s(&f), "--partition", p])
                .status
                .code(),
            Some(65),
            "{p}"
        );
    }

    let nh = write(
        &dir,
        "nh.json",
        r#"{"num_modes": 1, "log_scale": 0.0, "R": [[[0, 0]]], "B": [[[-0.5, 0.3]]]}"#,
    );
    assert_eq!(
        fockppt(&["ppt", "--state", s(&nh), "--partition", "0|0"])
            .status
            .code(),
        Some(66)
    );

    assert_eq!(
        fockppt(&["ppt", "--partition", "0|1"]).status.code(),
        Some(64)
    );
    assert_eq!(
        fockppt(&["ppt", "--state", s(&f), "--partition", "0|1", "--tol", "x"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(fockppt(&["--help"]).status.code(), Some(0));
}

#[test]
fn positivity_verdict() {
    let dir = TempDir::new().unwrap();
    let f = write_state(
        &dir,
        "thermal.json",
        &GaussianOperator::new(diag(&[0.0]), diag(&[-0.5]), 0.0).unwrap(),
    );
    let out = fockppt(&["positivity", "--state", s(&f)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["class"], "PositiveDefinite");
    let f = write_state(
        &dir,
        "neg.json",
        &GaussianOperator::new(diag(&[0.0]), diag(&[-1.5]), 0.0).unwrap(),
    );
    assert_eq!(
        fockppt(&["positivity", "--state", s(&f)]).status.code(),
        Some(10)
    );
}

#[test]
fn oracle_compare_tmsv_and_three_mode() {
    let dir = TempDir::new().unwrap();
    let f = write_state(&dir, "tmsv.json", &tmsv(0.5).unwrap());
    let out = fockppt(&[
        "oracle-compare",
        "--state",
        s(&f),
        "--partition",
        "0|1",
        "--cutoff",
        "10",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    assert_eq!(r["agreement"], true);
    assert!(r["commuting_residual"].as_f64().unwrap() < 1e-8);
    assert!(r.get("candidate_threshold").is_none());

    let spec = write(
        &dir,
        "tm.json",
        &serde_json::to_string(&ThreeModeSpec::real(2.0, 0.0, 0.0, 0.0).unwrap()).unwrap(),
    );
    let out = fockppt(&["oracle-compare", "--three-mode", s(&spec), "--cutoff", "5"]);
    let r = json(&out);
    assert_eq!(
        (r["analytic_npt"].clone(), r["fock_npt"].clone()),
        (true.into(), true.into())
    );
    assert_eq!(r["candidate_threshold"]["npt"], true);

    let spec = write(
        &dir,
        "tm2.json",
        &serde_json::to_string(&ThreeModeSpec::real(0.7, 0.0, 0.3, 0.4).unwrap()).unwrap(),
    );
    let r = json(&fockppt(&[
        "oracle-compare",
        "--three-mode",
        s(&spec),
        "--cutoff",
        "5",
    ]));
    assert_eq!(r["candidate_threshold"]["npt"], false);
    assert_eq!(r["analytic_npt"], true);
    assert_eq!(r["agreement"], true);
}

#[test]
fn oracle_compare_errors() {
    let dir = TempDir::new().unwrap();
    let f = write_state(&dir, "tmsv.json", &tmsv(0.5).unwrap());
    let out = fockppt(&[
        "oracle-compare",
        "--state",
        s(&f),
        "--partition",
        "0|1",
        "--cutoff",
        "5000",
    ]);
    assert_eq!(out.status.code(), Some(65));
    let mut r = CMatrix::zeros(1, 1);
    r[(0, 0)] = Complex64::new(0.9, 0.0);
    let div = write_state(
        &dir,
        "div.json",
        &GaussianOperator::new(r, diag(&[-0.1]), 0.0).unwrap(),
    );
    let out = fockppt(&["oracle-compare", "--state", s(&div), "--partition", "0|0"]);
    assert_eq!(out.status.code(), Some(67));
}

#[test]
fn partial_trace_outputs() {
    let dir = TempDir::new().unwrap();
    let f = write_state(&dir, "tmsv.json", &tmsv(0.5).unwrap());
    let out = fockppt(&["partial-trace", "--state", s(&f), "--trace-out", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let reduced = GaussianOperator::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!((reduced.b()[(0, 0)].re + 1.0 / 0.5f64.cosh().powi(2)).abs() < 1e-12);

    let out = fockppt(&[
        "partial-trace",
        "--state",
        s(&f),
        "--trace-out",
        "1",
        "--cutoff",
        "30",
    ]);
    let r = json(&out);
    assert!(r["oracle_residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(r["traced"], serde_json::json!([1]));

    // uncoupled modes: the kept block is untouched
    let g = GaussianOperator::new(diag(&[0.1, 0.0]), diag(&[-0.5, -0.6]), 0.0).unwrap();
    let f = write_state(&dir, "unc.json", &g);
    let out = fockppt(&["partial-trace", "--state", s(&f), "--trace-out", "1"]);
    let reduced = GaussianOperator::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(reduced.r()[(0, 0)], g.r()[(0, 0)]);
    assert_eq!(reduced.b()[(0, 0)], g.b()[(0, 0)]);

    let ill = write_state(
        &dir,
        "ill.json",
        &GaussianOperator::new(CMatrix::zeros(3, 3), diag(&[-0.5, -1.0, -1e-13]), 0.0).unwrap(),
    );
    let out = fockppt(&["partial-trace", "--state", s(&ill), "--trace-out", "1,2"]);
    assert_eq!(out.status.code(), Some(68));
    assert!(String::from_utf8_lossy(&out.stderr).contains("condition number"));
    let out = fockppt(&["partial-trace", "--state", s(&ill), "--trace-out", "7"]);
    assert_eq!(out.status.code(), Some(65));
}

#[test]
fn partial_trace_nonconvergent() {
    let dir = TempDir::new().unwrap();
    let mut r = CMatrix::zeros(2, 2);
    r[(1, 1)] = Complex64::new(0.9, 0.0);
    let f = write_state(
        &dir,
        "div.json",
        &GaussianOperator::new(r, diag(&[-0.5, -0.1]), 0.0).unwrap(),
    );
    assert_eq!(
        fockppt(&["partial-trace", "--state", s(&f), "--trace-out", "1"])
            .status
            .code(),
        Some(67)
    );
}

#[test]
fn state_file_round_trip_is_exact() {
    let dir = TempDir::new().unwrap();
    let g = fockppt::ensemble::random_trace_class(
        &mut fockppt::ensemble::seeded(3),
        3,
        fockppt::ensemble::EnsembleSpec::STRONG,
    );
    let f = write_state(&dir, "g.json", &g);
    // tracing out nothing emits the operator unchanged
    let out = fockppt(&["partial-trace", "--state", s(&f), "--trace-out", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        GaussianOperator::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap(),
        g
    );
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (
        header,
        lines
            .map(|l| l.split(',').map(String::from).collect())
            .collect(),
    )
}

#[test]
fn phase_damping_sweep_csv() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("sweep.csv");
    let out = fockppt(&[
        "sweep-phase-damping",
        "--r",
        "0:1:3",
        "--gamma-t",
        "0:5:6",
        "--cutoff",
        "8",
        "--out",
        s(&out_path),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, rows) = csv_rows(&std::fs::read_to_string(&out_path).unwrap());
    assert_eq!(header, ["r", "gamma_t", "witness", "min_pt_eigenvalue"]);
    assert_eq!(rows.len(), 18);
    let num = |c: &str| c.parse::<f64>().unwrap();
    for row in &rows {
        let (r, gt, w) = (num(&row[0]), num(&row[1]), num(&row[2]));
        assert_eq!(
            row[2]
                .split('e')
                .next()
                .unwrap()
                .replace(['-', '.'], "")
                .len(),
            17
        );
        if r == 0.0 {
            assert_eq!(w, 0.0);
        } else {
            assert!(w < 0.0);
        }
        if r == 0.5 && gt == 1.0 {
            assert!((w + 0.066849).abs() < 1e-6);
        }
    }
    // |witness| strictly decreases along each fixed-r row
    for chunk in rows.chunks(6).skip(1) {
        let w: Vec<f64> = chunk.iter().map(|row| num(&row[2]).abs()).collect();
        assert!(w.windows(2).all(|p| p[1] < p[0]));
    }

    // identical output on a second run
    let again = fockppt(&[
        "sweep-phase-damping",
        "--r",
        "0:1:3",
        "--gamma-t",
        "0:5:6",
        "--cutoff",
        "8",
    ]);
    assert_eq!(
        String::from_utf8(again.stdout).unwrap(),
        std::fs::read_to_string(&out_path).unwrap()
    );

    let out = fockppt(&[
        "sweep-phase-damping",
        "--r",
        "1.5",
        "--gamma-t",
        "1",
        "--cutoff",
        "8",
        "--max-tail",
        "1e-8",
    ]);
    assert_eq!(out.status.code(), Some(65));
    assert_eq!(
        fockppt(&["sweep-phase-damping", "--r", "0:1:1", "--gamma-t", "1"])
            .status
            .code(),
        Some(64)
    );
    let j = fockppt(&[
        "sweep-phase-damping",
        "--r",
        "0.5",
        "--gamma-t",
        "1",
        "--json",
    ]);
    assert_eq!(json(&j)[0]["gamma_t"], 1.0);
}

#[test]
fn impure_mixture_reports() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "mix.json",
        &serde_json::to_string(&MixtureSpec::uniform(0.5, 1.0).unwrap()).unwrap(),
    );
    let out = fockppt(&[
        "impure-mixture",
        "--spec",
        s(&f),
        "--m",
        "0",
        "--cutoff",
        "14",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!((r["analytic"].as_f64().unwrap() + 0.228705).abs() < 1e-6);
    assert!(r["abs_difference"].as_f64().unwrap() < 1e-6);

    let with_mass = write(
        &dir,
        "mix2.json",
        r#"{"r_lower": 0.5, "r_upper": 1.0, "p_density": {"uniform": {"weight": 0.6}}, "pprime": [[0.4]]}"#,
    );
    let r = json(&fockppt(&[
        "impure-mixture",
        "--spec",
        s(&with_mass),
        "--m",
        "1",
    ]));
    assert!(r["analytic"].as_f64().unwrap() < 0.0 && r["numeric"].as_f64().unwrap() < 0.0);

    let m1 = write(
        &dir,
        "mix3.json",
        r#"{"r_lower": 0.5, "r_upper": 1.0, "p_density": {"uniform": {"weight": 0.6}}, "pprime": [[0.0, 0.0], [0.4, 0.0]]}"#,
    );
    assert_eq!(
        fockppt(&["impure-mixture", "--spec", s(&m1), "--m", "0"])
            .status
            .code(),
        Some(65)
    );
    let bad = write(
        &dir,
        "mix4.json",
        r#"{"r_lower": 1.0, "r_upper": 0.5, "p_density": {"uniform": {"weight": 1.0}}, "pprime": []}"#,
    );
    assert_eq!(
        fockppt(&["impure-mixture", "--spec", s(&bad), "--m", "0"])
            .status
            .code(),
        Some(65)
    );
    let junk = write(&dir, "mix5.json", "[");
    assert_eq!(
        fockppt(&["impure-mixture", "--spec", s(&junk), "--m", "0"])
            .status
            .code(),
        Some(64)
    );
}

#[test]
fn three_mode_audit_table() {
    let out = fockppt(&[
        "three-mode-audit",
        "--sweep",
        "zeta13=0.5:1.5:5",
        "--fix",
        "lambda=0.2",
        "--fix",
        "lambda3=0.3",
        "--cutoff",
        "5",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, rows) = csv_rows(std::str::from_utf8(&out.stdout).unwrap());
    assert_eq!(header.len(), 17);
    assert_eq!(rows.len(), 5);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    for row in &rows {
        assert_eq!(row[col("analytic_npt")], row[col("oracle_npt")]);
    }
    // at zeta13 = 0.75 the spectral condition holds but the candidate bound does not
    assert_eq!(rows[1][col("analytic_npt")], "true");
    assert_eq!(rows[1][col("candidate_npt")], "false");

    assert_eq!(
        fockppt(&["three-mode-audit", "--sweep", "mu=0:1:3"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(
        fockppt(&[
            "three-mode-audit",
            "--sweep",
            "lambda=0:2:3",
            "--cutoff",
            "3"
        ])
        .status
        .code(),
        Some(65)
    );
}

#[test]
fn config_file_defaults() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"cutoff": 3}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_fockppt"))
        .args(["sweep-phase-damping", "--r", "0.5", "--gamma-t", "1"])
        .env("FOCKPPT_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // the flag wins over the file
    let f = write_state(&dir, "tmsv.json", &tmsv(0.5).unwrap());
    let out = Command::new(env!("CARGO_BIN_EXE_fockppt"))
        .args([
            "oracle-compare",
            "--state",
            s(&f),
            "--partition",
            "0|1",
            "--cutoff",
            "4",
        ])
        .env("FOCKPPT_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(json(&out)["cutoffs"], serde_json::json!([4, 4]));
    let out = Command::new(env!("CARGO_BIN_EXE_fockppt"))
        .args(["oracle-compare", "--state", s(&f), "--partition", "0|1"])
        .env("FOCKPPT_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(json(&out)["cutoffs"], serde_json::json!([3, 3]));

    let broken = write(&dir, "broken.json", "{");
    let out = Command::new(env!("CARGO_BIN_EXE_fockppt"))
        .args(["sweep-phase-damping", "--r", "0.5", "--gamma-t", "1"])
        .env("FOCKPPT_CONFIG", &broken)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
}
