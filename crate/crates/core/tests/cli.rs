use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schur-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn spnorm_chi2_is_sqrt5() {
    let out = cli(&["spnorm", "--chi", "2", "--p", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let value: f64 = stdout(&out).trim().parse().unwrap();
    assert!((value - 5f64.sqrt()).abs() < 1e-12);
    assert!(stdout(&out).starts_with("2.2360679"));
}

#[test]
fn spnorm_reads_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    fs::write(&path, "[[1, [0, 1]], [0, 1]]").unwrap();
    let out = cli(&[
        "spnorm",
        "--matrix",
        path.to_str().unwrap(),
        "--p",
        "2",
        "--spectrum",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<f64> = stdout(&out).lines().map(|l| l.parse().unwrap()).collect();
    // Frobenius norm of [[1, i], [0, 1]]
    assert!((lines[0] - 3f64.sqrt()).abs() < 1e-12);
    assert_eq!(lines.len(), 3);

    fs::write(&path, "[[1, 2], [3]]").unwrap();
    let out = cli(&["spnorm", "--matrix", path.to_str().unwrap(), "--p", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn besov_of_z_is_one() {
    let out = cli(&["besov", "--coeffs", "0,1", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((stdout(&out).trim().parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn multiplier_bound_brackets() {
    let out = cli(&[
        "multiplier-bound",
        "--delta",
        "9",
        "--p",
        "0.5",
        "--budget",
        "200",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let get = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(key))
            .unwrap()
            .trim()
            .parse()
            .unwrap()
    };
    assert!(get("lower") > 1.0 && get("lower") <= get("upper"));
    assert_eq!(
        cli(&["multiplier-bound", "--delta", "9", "--p", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&[]).status.code(), Some(2));
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        cli(&["spnorm", "--chi", "2", "--p", "1", "--bogus"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cli(&["spnorm", "--chi", "2", "--delta", "2", "--p", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(cli(&["experiment", "run", "E10"]).status.code(), Some(2));
    assert_eq!(
        cli(&["experiment", "run", "E1", "--kmin", "8", "--kmax", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cli(&["spnorm", "--chi", "2", "--p", "-1"]).status.code(),
        Some(2)
    );
}

fn csv_without_wall_time(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn experiment_run_writes_csv_and_fits() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("e1.csv");
    let out = cli(&[
        "experiment",
        "run",
        "E1",
        "--p",
        "0.5",
        "--kmin",
        "4",
        "--kmax",
        "8",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("experiment,p,k,n,sample,quantity,value,wall_ms")
    );
    assert_eq!(lines.count(), 5);

    let fits: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("e1.fits.json")).unwrap())
            .unwrap();
    let fit = &fits[0];
    for key in [
        "experiment",
        "p",
        "target",
        "slope",
        "intercept",
        "max_residual",
        "pass",
    ] {
        assert!(fit.get(key).is_some(), "missing {key}");
    }
    let slope = fit["slope"].as_f64().unwrap();
    assert!((1.9..=2.1).contains(&slope));
    assert_eq!(fit["pass"], serde_json::Value::Bool(true));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    fs::write(
        &cfg,
        format!(r#"{{"experiment": "E4", "k_min": 2, "k_max": 4, "samples": 3, "seed": 5, "output": "{}"}}"#, out_a.display()),
    )
    .unwrap();
    let cfg_s = cfg.to_str().unwrap();
    assert_eq!(
        cli(&["experiment", "run", "--config", cfg_s]).status.code(),
        Some(0)
    );
    assert_eq!(
        cli(&[
            "experiment",
            "run",
            "--config",
            cfg_s,
            "--out",
            out_b.to_str().unwrap()
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(csv_without_wall_time(&out_a), csv_without_wall_time(&out_b));

    let seeded = dir.path().join("c.csv");
    cli(&[
        "experiment",
        "run",
        "--config",
        cfg_s,
        "--seed",
        "6",
        "--out",
        seeded.to_str().unwrap(),
    ]);
    assert_ne!(
        csv_without_wall_time(&out_a),
        csv_without_wall_time(&seeded)
    );

    assert_eq!(
        cli(&["experiment", "run", "E5", "--config", cfg_s])
            .status
            .code(),
        Some(2)
    );
    fs::write(&cfg, r#"{"experiment": "E4", "unknown": true}"#).unwrap();
    assert_eq!(
        cli(&["experiment", "run", "--config", cfg_s]).status.code(),
        Some(2)
    );
}

#[test]
fn unwritable_output_fails_before_computing() {
    let out = cli(&[
        "experiment",
        "run",
        "E1",
        "--kmin",
        "4",
        "--kmax",
        "12",
        "--out",
        "/nonexistent-dir/e1.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
}

#[test]
fn failing_fit_exits_1() {
    // over k = 0..2 the E9 slope is far from 1
    let out = cli(&["experiment", "run", "E9", "--kmin", "0", "--kmax", "2"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("FAIL"));
}
