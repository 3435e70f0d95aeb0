//! Convergence experiments over seeded random-spectrum ensembles.
//!
//! Every experiment draws the same `θ` samples for every `m`, evaluates a
//! per-sample error at each `m`, and records the maximum over the ensemble.
//! Samples are processed in parallel; the maximum is order independent, so
//! the records are bitwise reproducible.

pub mod config;
pub mod fit;
pub mod io;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::advection::{assemble_c, Propagator};
use crate::basis::{BasisKind, BasisSpec};
use crate::error::{invalid, Error, Result};
use crate::functional::{model_by_name, FunctionalModel};
use crate::grid::{dot, GridFunction, UniformGrid};
use crate::integral::{integrate_cylinder, CylinderIntegralSpec, IntegrationMethod};
use crate::projection::Projector;
use crate::spectrum::{
    Decay, FourierSpectrum, SpectrumLaw, DEFAULT_MAX_MODE, SECONDARY_STREAM_OFFSET,
};

pub use config::{parse_settings, Settings};
pub use fit::{fit_groups, fit_rate, fit_sweep, FitModel, FitRow, RateFit, FIT_FLOOR};
pub use io::{
    emit_csv, emit_fits_csv, emit_integral_csv, read_records_csv, write_fits,
    write_integral_records, write_records,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    /// `max_θ ‖θ − P_mθ‖`.
    Projection,
    /// `ε₀(m) = max_θ |F([θ]) − F([P_mθ])|`.
    Functional,
    /// `ε₁(m) = max_{θ,η} |F'([θ])η − F'([P_mθ])η| / ‖η‖`.
    Frechet,
    /// `max_θ ‖δF[θ] − δF[P_mθ]‖`.
    DerivativeField,
    /// `ε₀(m, t) = max_θ |F([θ], t) − f(a, t)|`.
    Fde,
    /// Gaussian integral of a model over `D_m`.
    Integral,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Projection,
        ExperimentKind::Functional,
        ExperimentKind::Frechet,
        ExperimentKind::DerivativeField,
        ExperimentKind::Fde,
        ExperimentKind::Integral,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Projection => "projection",
            ExperimentKind::Functional => "functional",
            ExperimentKind::Frechet => "frechet",
            ExperimentKind::DerivativeField => "derivative-field",
            ExperimentKind::Fde => "fde",
            ExperimentKind::Integral => "integral",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == key)
            .ok_or_else(|| invalid(format!("unknown experiment `{s}`")))
    }
}

/// One experiment: what to measure, on which ensemble, at which `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Ensemble law; its seed is the experiment seed.
    pub law: SpectrumLaw,
    pub m_values: Vec<usize>,
    pub basis: BasisKind,
    pub n_theta_samples: usize,
    pub n_eta_samples: usize,
    pub t: f64,
    pub model: String,
    /// Quadrature points; `None` picks [`ExperimentConfig::quadrature_points`].
    pub quad_points: Option<usize>,
    pub integration: IntegrationMethod,
}

pub const DEFAULT_M_VALUES: [usize; 5] = [8, 16, 32, 64, 128];
pub const DEFAULT_THETA_SAMPLES: usize = 200;
pub const DEFAULT_ETA_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_GH_ORDER: usize = 64;

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, decay: Decay) -> Self {
        Self {
            experiment,
            law: SpectrumLaw::new(decay, DEFAULT_MAX_MODE, DEFAULT_SEED)
                .expect("positive mode count"),
            m_values: DEFAULT_M_VALUES.to_vec(),
            basis: BasisKind::TrigCardinal,
            n_theta_samples: DEFAULT_THETA_SAMPLES,
            n_eta_samples: DEFAULT_ETA_SAMPLES,
            t: PI,
            model: "sinsq".into(),
            quad_points: None,
            integration: IntegrationMethod::GaussHermite {
                order: DEFAULT_GH_ORDER,
            },
        }
    }

    pub fn seed(&self) -> u64 {
        self.law.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.law.seed = seed;
        self
    }

    pub fn bases(&self) -> Result<Vec<BasisSpec>> {
        self.m_values
            .iter()
            .map(|&m| BasisSpec::new(self.basis, m))
            .collect()
    }

    /// `max(8(m_max+1), 256, 2N+2)`: resolves every basis and every mode of
    /// the ensemble without aliasing.
    pub fn quadrature_points(&self) -> usize {
        self.quad_points.unwrap_or_else(|| {
            let m_max = self.m_values.iter().copied().max().unwrap_or(0);
            (8 * (m_max + 1)).max(256).max(2 * self.law.max_mode + 2)
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_values.is_empty() {
            return Err(invalid("m_values must not be empty"));
        }
        if self.m_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(format!(
                "m_values must be strictly increasing, got {:?}",
                self.m_values
            )));
        }
        let bases = self.bases()?;
        if self.n_theta_samples == 0 || self.n_eta_samples == 0 {
            return Err(invalid("sample counts must be positive"));
        }
        if !self.t.is_finite() {
            return Err(invalid(format!("t must be finite, got {}", self.t)));
        }
        model_by_name(&self.model)?;
        if self.experiment != ExperimentKind::Integral {
            let n = self.quadrature_points();
            for b in &bases {
                b.check_quadrature(n)?;
            }
        }
        Ok(())
    }

    fn record(&self, m: usize, error: f64) -> ConvergenceRecord {
        ConvergenceRecord {
            experiment: self.experiment,
            law: self.law.decay.name().to_string(),
            param: self.law.decay.param(),
            m,
            basis: self.basis,
            t: (self.experiment == ExperimentKind::Fde).then_some(self.t),
            error,
            seed: self.seed(),
        }
    }
}

/// One row of a convergence sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub experiment: ExperimentKind,
    pub law: String,
    pub param: f64,
    pub m: usize,
    pub basis: BasisKind,
    pub t: Option<f64>,
    pub error: f64,
    pub seed: u64,
}

/// One row of an integral sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralRecord {
    pub model: String,
    pub method: String,
    pub m: usize,
    pub estimate: f64,
    pub stderr: f64,
}

struct Sweep {
    grid: UniformGrid,
    projectors: Vec<Projector>,
    model: std::sync::Arc<dyn FunctionalModel>,
}

impl Sweep {
    fn new(config: &ExperimentConfig, expected: &[ExperimentKind]) -> Result<Self> {
        if !expected.contains(&config.experiment) {
            return Err(invalid(format!(
                "configuration is for `{}`, expected one of {:?}",
                config.experiment,
                expected.iter().map(|k| k.as_str()).collect::<Vec<_>>()
            )));
        }
        config.validate()?;
        let grid = UniformGrid::new(config.quadrature_points())?;
        let projectors = config
            .bases()?
            .into_iter()
            .map(|b| Projector::new(b, &grid))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid,
            projectors,
            model: model_by_name(&config.model)?,
        })
    }

    /// Runs `per_sample` on every `θ` and reduces the per-`m` errors by max.
    fn max_over_ensemble<F>(&self, config: &ExperimentConfig, per_sample: F) -> Result<Vec<f64>>
    where
        F: Fn(&FourierSpectrum, &GridFunction) -> Result<Vec<f64>> + Sync,
    {
        let rows = (0..config.n_theta_samples as u64)
            .into_par_iter()
            .map(|i| {
                let theta = config.law.sample(i);
                let values = theta.eval_on_grid(&self.grid);
                per_sample(&theta, &values)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut worst = vec![0.0f64; self.projectors.len()];
        for row in rows {
            for (w, e) in worst.iter_mut().zip(row) {
                if !e.is_finite() {
                    return Err(Error::NumericFailure(format!(
                        "non-finite error {e} in {}",
                        config.experiment
                    )));
                }
                *w = w.max(e);
            }
        }
        Ok(worst)
    }

    fn records(&self, config: &ExperimentConfig, errors: Vec<f64>) -> Vec<ConvergenceRecord> {
        config
            .m_values
            .iter()
            .zip(errors)
            .map(|(&m, e)| config.record(m, e))
            .collect()
    }
}

/// Dispatches on `config.experiment`; [`ExperimentKind::Integral`] is served by
/// [`run_integral_sweep`].
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ConvergenceRecord>> {
    match config.experiment {
        ExperimentKind::Projection => run_projection_convergence(config),
        ExperimentKind::Functional => run_functional_convergence(config),
        ExperimentKind::Frechet => run_frechet_convergence(config),
        ExperimentKind::DerivativeField => run_derivative_field_convergence(config),
        ExperimentKind::Fde => run_fde_convergence(config),
        ExperimentKind::Integral => Err(invalid(
            "integral sweeps produce integral records; use run_integral_sweep",
        )),
    }
}

pub fn run_projection_convergence(config: &ExperimentConfig) -> Result<Vec<ConvergenceRecord>> {
    let sweep = Sweep::new(config, &[ExperimentKind::Projection])?;
    let errors = sweep.max_over_ensemble(config, |_, values| {
        Ok(sweep
            .projectors
            .iter()
            .map(|p| p.l2_error_samples(values))
            .collect())
    })?;
    Ok(sweep.records(config, errors))
}

pub fn run_functional_convergence(config: &ExperimentConfig) -> Result<Vec<ConvergenceRecord>> {
    let sweep = Sweep::new(config, &[ExperimentKind::Functional])?;
    let model = sweep.model.as_ref();
    let errors = sweep.max_over_ensemble(config, |_, values| {
        let exact = model.evaluate(values);
        Ok(sweep
            .projectors
            .iter()
            .map(|p| {
                let a = p.project_samples(values.values());
                (exact - model.evaluate(&p.synthesize_slice(a.as_slice()))).abs()
            })
            .collect())
    })?;
    Ok(sweep.records(config, errors))
}

/// `F'([θ])η − F'([P_mθ])η = (δF[θ] − δF[P_mθ], η)`: the kernel difference is
/// formed once per `(θ, m)` and paired with every `η`. The `η` ensemble is
/// drawn from the same law, starting at stream [`SECONDARY_STREAM_OFFSET`],
/// and shared by all `θ`.
pub fn run_frechet_convergence(config: &ExperimentConfig) -> Result<Vec<ConvergenceRecord>> {
    let sweep = Sweep::new(config, &[ExperimentKind::Frechet])?;
    let model = sweep.model.as_ref();
    let etas: Vec<(GridFunction, f64)> = (0..config.n_eta_samples as u64)
        .into_par_iter()
        .map(|j| {
            let eta = config
                .law
                .sample(SECONDARY_STREAM_OFFSET + j)
                .eval_on_grid(&sweep.grid);
            let norm = eta.norm_l2();
            (eta, norm)
        })
        .collect();
    if etas.iter().any(|(_, n)| *n == 0.0) {
        return Err(Error::NumericFailure("η sample with zero norm".into()));
    }
    let w = sweep.grid.weight();
    let errors = sweep.max_over_ensemble(config, |_, values| {
        let field = model.derivative_field(values);
        Ok(sweep
            .projectors
            .iter()
            .map(|p| {
                let a = p.project_samples(values.values());
                let projected = model.derivative_field(&p.synthesize_slice(a.as_slice()));
                let diff: Vec<f64> = field
                    .values()
                    .iter()
                    .zip(projected.values())
                    .map(|(x, y)| x - y)
                    .collect();
                etas.iter()
                    .map(|(eta, norm)| (w * dot(&diff, eta.values())).abs() / norm)
                    .fold(0.0, f64::max)
            })
            .collect())
    })?;
    Ok(sweep.records(config, errors))
}

pub fn run_derivative_field_convergence(
    config: &ExperimentConfig,
) -> Result<Vec<ConvergenceRecord>> {
    let sweep = Sweep::new(config, &[ExperimentKind::DerivativeField])?;
    let model = sweep.model.as_ref();
    let errors = sweep.max_over_ensemble(config, |_, values| {
        let field = model.derivative_field(values);
        sweep
            .projectors
            .iter()
            .map(|p| {
                let a = p.project_samples(values.values());
                let projected = model.derivative_field(&p.synthesize_slice(a.as_slice()));
                Ok(field.sub(&projected)?.norm_l2())
            })
            .collect()
    })?;
    Ok(sweep.records(config, errors))
}

/// Result of an FDE sweep together with the stability bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct FdeSweep {
    pub records: Vec<ConvergenceRecord>,
    /// Largest `|f(a, t)|` over every cylindrical evaluation.
    pub max_abs_value: f64,
    /// Number of cylindrical evaluations checked against the sup-norm bound.
    pub evaluations: usize,
}

/// FDE sweep that also reports the stability bookkeeping. Any cylindrical
/// value with `|f| > sup|F₀|` aborts the sweep with a numeric failure.
pub fn run_fde_sweep(config: &ExperimentConfig) -> Result<FdeSweep> {
    let sweep = Sweep::new(config, &[ExperimentKind::Fde])?;
    let model = sweep.model.as_ref();
    let bound = model.sup_norm();
    let propagators = sweep
        .projectors
        .iter()
        .map(|p| Propagator::new(&assemble_c(p.basis(), &sweep.grid)?, config.t))
        .collect::<Result<Vec<_>>>()?;

    let rows = (0..config.n_theta_samples as u64)
        .into_par_iter()
        .map(|i| {
            let theta = config.law.sample(i);
            let values = theta.eval_on_grid(&sweep.grid);
            let exact = model.evaluate(&theta.shift(config.t).eval_on_grid(&sweep.grid));
            let mut row = Vec::with_capacity(propagators.len());
            let mut peak = 0.0f64;
            for (p, e) in sweep.projectors.iter().zip(&propagators) {
                let a = p.project_samples(values.values());
                let moved = e.apply(a.as_slice());
                let f = model.evaluate(&p.synthesize_slice(&moved));
                if f.is_nan() || f.abs() > bound {
                    return Err(Error::NumericFailure(format!(
                        "stability bound violated: |f| = {} > {bound} (sample {i}, m = {})",
                        f.abs(),
                        p.basis().m()
                    )));
                }
                peak = peak.max(f.abs());
                row.push((exact - f).abs());
            }
            Ok((row, peak))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut worst = vec![0.0f64; sweep.projectors.len()];
    let mut max_abs_value = 0.0f64;
    for (row, peak) in rows {
        max_abs_value = max_abs_value.max(peak);
        for (w, e) in worst.iter_mut().zip(row) {
            if !e.is_finite() {
                return Err(Error::NumericFailure(format!("non-finite FDE error {e}")));
            }
            *w = w.max(e);
        }
    }
    Ok(FdeSweep {
        records: sweep.records(config, worst),
        max_abs_value,
        evaluations: config.n_theta_samples * sweep.projectors.len(),
    })
}

pub fn run_fde_convergence(config: &ExperimentConfig) -> Result<Vec<ConvergenceRecord>> {
    Ok(run_fde_sweep(config)?.records)
}

/// Integrates `config.model` over `D_m` for every `m` of the sweep.
pub fn run_integral_sweep(config: &ExperimentConfig) -> Result<Vec<IntegralRecord>> {
    if config.experiment != ExperimentKind::Integral {
        return Err(invalid(format!(
            "configuration is for `{}`, expected `integral`",
            config.experiment
        )));
    }
    config.validate()?;
    config
        .bases()?
        .into_iter()
        .map(|basis| {
            let est = integrate_cylinder(&CylinderIntegralSpec {
                model: config.model.clone(),
                basis,
                method: config.integration,
            })?;
            Ok(IntegralRecord {
                model: config.model.clone(),
                method: config.integration.name().to_string(),
                m: basis.m(),
                estimate: est.estimate,
                stderr: est.stderr,
            })
        })
        .collect()
}
