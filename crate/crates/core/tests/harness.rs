use std::f64::consts::{PI, TAU};

use cylapprox::harness::{
    emit_csv, fit_sweep, parse_settings, read_records_csv, run_experiment, run_fde_sweep,
    ConvergenceRecord, ExperimentConfig, ExperimentKind, FitModel, FIT_FLOOR,
};
use cylapprox::spectrum::Decay;

fn config(kind: ExperimentKind, decay: Decay, samples: usize) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(kind, decay);
    c.n_theta_samples = samples;
    c.n_eta_samples = 100;
    c
}

fn errors(records: &[ConvergenceRecord]) -> Vec<f64> {
    records.iter().map(|r| r.error).collect()
}

fn laws() -> Vec<Decay> {
    vec![
        Decay::algebraic(1.5).unwrap(),
        Decay::algebraic(2.5).unwrap(),
        Decay::exponential(1.5).unwrap(),
        Decay::exponential(3.0).unwrap(),
    ]
}

#[test]
fn functional_errors_obey_the_mean_value_bound() {
    for decay in laws() {
        let proj = errors(&run_experiment(&config(ExperimentKind::Projection, decay, 60)).unwrap());
        let func = errors(&run_experiment(&config(ExperimentKind::Functional, decay, 60)).unwrap());
        for (f, p) in func.iter().zip(&proj) {
            assert!(*f <= PI.sqrt() * p + 1e-9, "{decay:?}: {f} > √π·{p}");
        }
    }
}

#[test]
fn smooth_algebraic_ensemble_decreases_strictly() {
    let e = errors(
        &run_experiment(&config(
            ExperimentKind::Functional,
            Decay::algebraic(3.0).unwrap(),
            200,
        ))
        .unwrap(),
    );
    assert!(e.windows(2).all(|w| w[1] < w[0]), "{e:?}");
}

#[test]
fn kernel_errors_are_lipschitz_in_the_projection_error() {
    // |sin 2u − sin 2v| ≤ 2|u − v| bounds both the Fréchet and the field error
    for decay in laws() {
        let proj = errors(&run_experiment(&config(ExperimentKind::Projection, decay, 40)).unwrap());
        for kind in [ExperimentKind::Frechet, ExperimentKind::DerivativeField] {
            let e = errors(&run_experiment(&config(kind, decay, 40)).unwrap());
            for (x, p) in e.iter().zip(&proj) {
                assert!(*x <= 2.0 * p + 1e-9, "{kind} {decay:?}: {x} > 2·{p}");
            }
            assert!(e.last() < e.first(), "{kind} {decay:?}: {e:?}");
        }
    }
}

#[test]
fn derivative_field_converges_on_smooth_ensembles() {
    for decay in [
        Decay::algebraic(3.0).unwrap(),
        Decay::exponential(3.0).unwrap(),
    ] {
        let e =
            errors(&run_experiment(&config(ExperimentKind::DerivativeField, decay, 100)).unwrap());
        // strict decrease until the error reaches rounding level
        assert!(
            e.windows(2).all(|w| w[1] < w[0] || w[0] < FIT_FLOOR),
            "{decay:?}: {e:?}"
        );
        assert!(*e.last().unwrap() < 1e-3);
    }
}

#[test]
fn fde_matches_the_functional_sweep_at_period_points() {
    let decay = Decay::algebraic(2.0).unwrap();
    let func = errors(&run_experiment(&config(ExperimentKind::Functional, decay, 50)).unwrap());
    let mut fde = config(ExperimentKind::Fde, decay, 50);
    for (t, tol) in [(0.0, 1e-12), (TAU, 1e-8)] {
        fde.t = t;
        let e = errors(&run_experiment(&fde).unwrap());
        for (a, b) in e.iter().zip(&func) {
            assert!((a - b).abs() <= tol, "t={t}: {a} vs {b}");
        }
    }
}

#[test]
fn fde_slope_at_half_period_tracks_the_functional_slope() {
    for alpha in [1.5, 3.0] {
        let decay = Decay::algebraic(alpha).unwrap();
        let func = run_experiment(&config(ExperimentKind::Functional, decay, 50)).unwrap();
        let fde = run_experiment(&config(ExperimentKind::Fde, decay, 50)).unwrap();
        let (a, b) = (
            fit_sweep(&func, FitModel::Algebraic).unwrap(),
            fit_sweep(&fde, FitModel::Algebraic).unwrap(),
        );
        assert!(
            b.slope < 0.0 && (a.slope - b.slope).abs() <= 0.5,
            "α={alpha}: {} vs {}",
            a.slope,
            b.slope
        );
    }
}

#[test]
fn stability_is_checked_on_every_evaluation() {
    let cfg = config(ExperimentKind::Fde, Decay::algebraic(1.5).unwrap(), 40);
    let sweep = run_fde_sweep(&cfg).unwrap();
    assert_eq!(sweep.evaluations, 40 * cfg.m_values.len());
    assert!(sweep.max_abs_value > 0.0 && sweep.max_abs_value <= TAU);
}

#[test]
fn algebraic_projection_sweep_fits_a_power_law() {
    let records = run_experiment(&config(
        ExperimentKind::Projection,
        Decay::algebraic(2.5).unwrap(),
        200,
    ))
    .unwrap();
    let fit = fit_sweep(&records, FitModel::Algebraic).unwrap();
    assert!(fit.slope < 0.0 && fit.r2 >= 0.9, "{fit:?}");
    assert_eq!((fit.m_lo, fit.m_hi, fit.points), (8, 128, 5));
}

#[test]
fn every_sweep_ends_below_where_it_starts() {
    for decay in laws() {
        for kind in [
            ExperimentKind::Projection,
            ExperimentKind::Functional,
            ExperimentKind::Fde,
        ] {
            let e = errors(&run_experiment(&config(kind, decay, 30)).unwrap());
            assert!(e.last() < e.first(), "{kind} {decay:?}: {e:?}");
        }
    }
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        ExperimentKind::Frechet,
        Decay::exponential(2.0).unwrap(),
        20,
    );
    let (p1, p2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    emit_csv(&run_experiment(&cfg).unwrap(), &p1).unwrap();
    emit_csv(&run_experiment(&cfg).unwrap(), &p2).unwrap();
    let (a, b) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert_eq!(
        read_records_csv(&p1).unwrap(),
        run_experiment(&cfg).unwrap()
    );

    let other = cfg.clone().with_seed(2);
    emit_csv(&run_experiment(&other).unwrap(), &p2).unwrap();
    assert_ne!(a, std::fs::read(&p2).unwrap());
}

#[test]
fn settings_file_drives_the_experiment() {
    let file = "experiment = fde\nlaw = exponential\nparam = 2\nm = 4, 8\nsamples = 7\nt = 0.5*pi\nseed = 9\n";
    let mut settings = parse_settings(file).unwrap();
    let cfg = settings.to_config().unwrap();
    assert_eq!(cfg.experiment, ExperimentKind::Fde);
    assert_eq!(cfg.law.decay, Decay::exponential(2.0).unwrap());
    assert_eq!(
        (cfg.m_values.clone(), cfg.n_theta_samples, cfg.seed()),
        (vec![4, 8], 7, 9)
    );
    assert!((cfg.t - PI / 2.0).abs() <= 1e-15);

    let mut flags = parse_settings("samples = 3\nt = 2pi\n").unwrap();
    flags.set("seed", "11").unwrap();
    settings.merge(&flags);
    let cfg = settings.to_config().unwrap();
    assert_eq!((cfg.n_theta_samples, cfg.seed(), cfg.t), (3, 11, TAU));
    assert_eq!(run_experiment(&cfg).unwrap().len(), 2);
    assert!(parse_settings("bogus = 1").is_err());
}
