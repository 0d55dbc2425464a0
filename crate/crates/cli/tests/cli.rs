use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fracop_core::solver::SolutionDocument;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn fracop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn ml_eval_exponential() {
    let out = fracop(&["ml-eval", "--alpha", "1", "--beta", "1", "--z", "1"]);
    assert!(out.status.success());
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - std::f64::consts::E).abs() < 1e-14);
}

#[test]
fn kernel_verify_reports_small_residuals() {
    let out = fracop(&["kernel-verify"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let line = text.lines().find(|l| l.contains("power-law(alpha=0.5)")).unwrap();
    let residual: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
    assert!(residual < 1e-10);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",ok")));
}

#[test]
fn oracle_compare_on_caputo_relaxation() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cmp.csv");
    let out = fracop(&[
        "oracle-compare",
        "--problem",
        fixture("caputo_relaxation.json").to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let worst: f64 = stdout(&out).rsplit(':').next().unwrap().trim().parse().unwrap();
    assert!(worst < 1e-3);
    let table = std::fs::read_to_string(csv).unwrap();
    assert_eq!(table.lines().next(), Some("t,y_closed,y_volterra,abs_err,rel_err"));
    assert_eq!(table.lines().count(), 1025 + 1);
}

#[test]
fn identical_runs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let problem = fixture("hilfer_multiterm.json");
    for format in ["json", "csv"] {
        let paths: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("run{i}.{format}"))).collect();
        for p in &paths {
            let out = fracop(&[
                "solve-multiterm",
                "--problem",
                problem.to_str().unwrap(),
                "--format",
                format,
                "--n-steps",
                "64",
                "--out",
                p.to_str().unwrap(),
            ]);
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        }
        assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    }
}

#[test]
fn json_solution_round_trips_bit_exactly() {
    let problem = fixture("rl_relaxation.json");
    let args = |format| {
        fracop(&[
            "solve-relax",
            "--problem",
            problem.to_str().unwrap(),
            "--format",
            format,
            "--n-steps",
            "16",
        ])
    };
    let doc: SolutionDocument = serde_json::from_str(&stdout(&args("json"))).unwrap();
    let csv = stdout(&args("csv"));
    for line in csv.lines().skip(2) {
        let mut fields = line.split(',').map(|x| x.parse::<f64>().unwrap());
        let (t, y) = (fields.next().unwrap(), fields.next().unwrap());
        assert_eq!(doc.solution.evaluate(t).unwrap().to_bits(), y.to_bits(), "t = {t}");
    }
    // the RL solution is unbounded at t = 0
    assert!(csv.lines().nth(1).unwrap().ends_with(",NaN"));
}

#[test]
fn exit_codes() {
    assert_eq!(fracop(&["solve-basic"]).status.code(), Some(1));
    assert_eq!(fracop(&["no-such-command"]).status.code(), Some(1));
    let bad_grid = fracop(&[
        "solve-relax",
        "--problem",
        fixture("caputo_relaxation.json").to_str().unwrap(),
        "--format",
        "csv",
        "--n-steps",
        "2",
    ]);
    assert_eq!(bad_grid.status.code(), Some(1));
    let overflow = fracop(&["ml-eval", "--alpha", "0.5", "--beta", "1", "--z", "-45"]);
    assert_eq!(overflow.status.code(), Some(2));
    assert!(fracop(&["--help"]).status.success());
}
