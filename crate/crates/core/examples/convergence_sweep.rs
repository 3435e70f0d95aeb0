//! Run a functional convergence sweep on a small ensemble, fit its rate and
//! print the CSV.

use cylapprox::harness::{
    fit_sweep, run_experiment, write_records, ExperimentConfig, ExperimentKind, FitModel,
};
use cylapprox::spectrum::Decay;

fn main() -> cylapprox::Result<()> {
    for kind in [
        ExperimentKind::Projection,
        ExperimentKind::Functional,
        ExperimentKind::Frechet,
    ] {
        let mut config = ExperimentConfig::new(kind, Decay::algebraic(2.0)?);
        config.n_theta_samples = 40;
        config.n_eta_samples = 200;
        let records = run_experiment(&config)?;
        let fit = fit_sweep(&records, FitModel::Algebraic)?;
        println!("{kind}: slope {:.3}, r² {:.4}", fit.slope, fit.r2);
        if kind == ExperimentKind::Functional {
            write_records(std::io::stdout().lock(), &records)?;
        }
    }
    Ok(())
}
