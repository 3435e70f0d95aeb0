use std::path::Path;
use std::process::{Command, Output};

use cylapprox::harness::{read_records_csv, ExperimentKind};
use cylapprox::spectrum::{Decay, SpectrumFile, SpectrumLaw};

fn cylapprox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cylapprox"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = cylapprox(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sample_writes_the_seeded_spectrum() {
    let text = ok(&[
        "sample",
        "--law",
        "algebraic",
        "--param",
        "2.5",
        "--modes",
        "16",
        "--seed",
        "4",
        "--index",
        "2",
    ]);
    let file: SpectrumFile = text.parse().unwrap();
    let law = SpectrumLaw::new(Decay::algebraic(2.5).unwrap(), 16, 4).unwrap();
    assert_eq!(file.spectrum, law.sample(2));
    assert_eq!(file.law, Some(law));
}

#[test]
fn converge_is_deterministic_and_parsable() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let args = |out: &Path| {
        vec![
            "converge".to_string(),
            "--experiment=frechet".into(),
            "--law=exponential".into(),
            "--param=2".into(),
            "--m=4,8,16".into(),
            "--samples=6".into(),
            "--eta-samples=10".into(),
            format!("--out={}", path(out)),
        ]
    };
    for p in [&a, &b] {
        let args = args(p);
        ok(&args.iter().map(String::as_str).collect::<Vec<_>>());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let records = read_records_csv(&a).unwrap();
    assert_eq!(records.iter().map(|r| r.m).collect::<Vec<_>>(), [4, 8, 16]);
    assert!(records
        .iter()
        .all(|r| r.experiment == ExperimentKind::Frechet && r.t.is_none()));
}

#[test]
fn fde_flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.conf");
    std::fs::write(
        &cfg,
        "# sweep\nlaw = algebraic\nparam = 3\nm = 4,8,16\nsamples = 4\nt = pi\n",
    )
    .unwrap();
    let from_file = ok(&["fde", "--config", path(&cfg)]);
    assert!(from_file
        .lines()
        .skip(1)
        .all(|l| l.starts_with("fde,algebraic,3,") && l.contains(",3.141592653589793,")));
    let overridden = ok(&["fde", "--config", path(&cfg), "--t", "0", "--m", "4,8"]);
    let rows: Vec<&str> = overridden.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|l| l.contains(",cardinal,0,")));
}

#[test]
fn integral_reports_both_backends() {
    let gh = ok(&["integral"]);
    let rows: Vec<Vec<&str>> = gh.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert_eq!(&r[..2], ["cauchy-sin", "gauss-hermite"]);
        assert!((r[3].parse::<f64>().unwrap() - 0.655_679_542_418_798_5).abs() <= 1e-6);
    }
    let mc = ok(&[
        "integral",
        "--method",
        "monte-carlo",
        "--mc-samples",
        "4000",
        "--m",
        "2",
    ]);
    let row: Vec<&str> = mc.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "monte-carlo");
    assert!(row[4].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn fit_reads_records_and_writes_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let (records, fits) = (dir.path().join("r.csv"), dir.path().join("f.csv"));
    ok(&[
        "converge",
        "--experiment",
        "projection",
        "--m",
        "8,16,32,64",
        "--samples",
        "10",
        "--out",
        path(&records),
    ]);
    ok(&["fit", path(&records), "--out", path(&fits)]);
    let text = std::fs::read_to_string(&fits).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "experiment,law,param,fit_model,slope,r2,m_lo,m_hi"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..4], ["projection", "algebraic", "2", "algebraic"]);
    assert!(row[4].parse::<f64>().unwrap() < 0.0);
    assert_eq!(&row[6..], ["8", "64"]);
}

#[test]
fn bad_input_fails_with_a_message() {
    for args in [
        &["converge", "--experiment", "nonsense"][..],
        &["converge", "--m", "7"],
        &["fde", "--law", "algebraic", "--param", "0.2"],
        &["fit", "/nonexistent/records.csv"],
    ] {
        let out = cylapprox(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(
            String::from_utf8_lossy(&out.stderr).starts_with("error: "),
            "{args:?}"
        );
    }
}
