use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cylapprox::harness::{
    emit_csv, emit_fits_csv, emit_integral_csv, fit_groups, read_records_csv, run_experiment,
    run_integral_sweep, write_fits, write_integral_records, write_records, ExperimentKind,
    FitModel, Settings,
};
use cylapprox::spectrum::{Decay, SpectrumFile, SpectrumLaw, DEFAULT_MAX_MODE};
use cylapprox::{Error, Result};

/// Cylindrical approximation experiments.
#[derive(Parser)]
#[command(name = "cylapprox", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one random spectrum and write it as text.
    Sample(SampleArgs),
    /// Run a convergence sweep and write its records as CSV.
    Converge {
        /// projection, functional, frechet, derivative-field or fde.
        #[arg(long)]
        experiment: Option<String>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Run the advection FDE sweep (same as `converge --experiment fde`).
    Fde(SweepArgs),
    /// Integrate a model against the Gaussian measure on D_m.
    Integral {
        #[command(flatten)]
        sweep: SweepArgs,
        /// gauss-hermite or monte-carlo.
        #[arg(long)]
        method: Option<String>,
        /// Gauss–Hermite nodes per active coordinate.
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        mc_samples: Option<usize>,
    },
    /// Fit decay rates to a records CSV.
    Fit {
        /// Records CSV written by `converge` or `fde`.
        input: PathBuf,
        /// algebraic or exponential; defaults to the law of each sweep.
        #[arg(long)]
        fit_model: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, default_value = "algebraic")]
    law: String,
    #[arg(long, default_value_t = 2.0)]
    param: f64,
    /// Number of Fourier modes N.
    #[arg(long, default_value_t = DEFAULT_MAX_MODE)]
    modes: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Sample index within the seeded ensemble.
    #[arg(long, default_value_t = 0)]
    index: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// algebraic or exponential.
    #[arg(long)]
    law: Option<String>,
    /// Decay parameter (α or β).
    #[arg(long)]
    param: Option<f64>,
    /// Comma-separated m values.
    #[arg(long)]
    m: Option<String>,
    /// Number of θ samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Number of η samples (Fréchet sweep).
    #[arg(long)]
    eta_samples: Option<usize>,
    /// Time; accepts multiples of `pi`.
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// cardinal or fourier.
    #[arg(long)]
    basis: Option<String>,
    /// Quadrature points.
    #[arg(long)]
    quad: Option<usize>,
    /// Fourier modes N of the ensemble.
    #[arg(long)]
    modes: Option<usize>,
}

impl SweepArgs {
    /// `defaults`, then the config file, then the flags.
    fn settings(&self, defaults: &[(&str, &str)]) -> Result<Settings> {
        let mut settings = Settings::new();
        for (k, v) in defaults {
            settings.set(k, *v)?;
        }
        if let Some(path) = &self.config {
            settings.merge(&Settings::load(path)?);
        }
        let flags: [(&str, Option<String>); 12] = [
            ("law", self.law.clone()),
            ("param", self.param.map(|v| v.to_string())),
            ("m", self.m.clone()),
            ("samples", self.samples.map(|v| v.to_string())),
            ("eta-samples", self.eta_samples.map(|v| v.to_string())),
            ("t", self.t.clone()),
            ("model", self.model.clone()),
            ("seed", self.seed.map(|v| v.to_string())),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
            ("basis", self.basis.clone()),
            ("quad", self.quad.map(|v| v.to_string())),
            ("modes", self.modes.map(|v| v.to_string())),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                settings.set(k, v)?;
            }
        }
        Ok(settings)
    }
}

fn out_path(settings: &Settings) -> Option<PathBuf> {
    settings.get("out").map(PathBuf::from)
}

fn converge(settings: Settings) -> Result<()> {
    let config = settings.to_config()?;
    let records = run_experiment(&config)?;
    match out_path(&settings) {
        Some(path) => emit_csv(&records, &path)?,
        None => write_records(io::stdout().lock(), &records)?,
    }
    let (fits, skipped) = fit_groups(&records, None);
    for f in fits {
        eprintln!(
            "{} {}({}): {} slope {:.4}, r² {:.4}, m {}..{}",
            f.experiment,
            f.law,
            f.param,
            f.fit.model,
            f.fit.slope,
            f.fit.r2,
            f.fit.m_lo,
            f.fit.m_hi
        );
    }
    for s in skipped {
        eprintln!("no fit for {s}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sample(args) => {
            let decay = Decay::from_name(&args.law, args.param)?;
            let law = SpectrumLaw::new(decay, args.modes, args.seed)?;
            let spectrum = law.sample(args.index);
            let text = SpectrumFile {
                law: Some(law),
                spectrum,
            }
            .to_text();
            match args.out {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|source| Error::Io { path, source })
                }
                None => io::stdout()
                    .lock()
                    .write_all(text.as_bytes())
                    .map_err(|source| Error::Io {
                        path: "<stdout>".into(),
                        source,
                    }),
            }
        }
        Command::Converge { experiment, sweep } => {
            let mut settings = sweep.settings(&[])?;
            if let Some(e) = experiment {
                settings.set("experiment", e)?;
            }
            converge(settings)
        }
        Command::Fde(sweep) => {
            let mut settings = sweep.settings(&[])?;
            settings.set("experiment", ExperimentKind::Fde.as_str())?;
            converge(settings)
        }
        Command::Integral {
            sweep,
            method,
            order,
            mc_samples,
        } => {
            let defaults = [
                ("model", "cauchy-sin"),
                ("basis", "fourier"),
                ("m", "2,6,10"),
            ];
            let mut settings = sweep.settings(&defaults)?;
            settings.set("experiment", ExperimentKind::Integral.as_str())?;
            if let Some(m) = method {
                settings.set("method", m)?;
            }
            if let Some(o) = order {
                settings.set("order", o.to_string())?;
            }
            if let Some(n) = mc_samples {
                settings.set("mc-samples", n.to_string())?;
            }
            let rows = run_integral_sweep(&settings.to_config()?)?;
            match out_path(&settings) {
                Some(path) => emit_integral_csv(&rows, &path),
                None => write_integral_records(io::stdout().lock(), &rows),
            }
        }
        Command::Fit {
            input,
            fit_model,
            out,
        } => {
            let records = read_records_csv(&input)?;
            let model = fit_model.map(|m| m.parse::<FitModel>()).transpose()?;
            let (fits, skipped) = fit_groups(&records, model);
            for s in skipped {
                eprintln!("no fit for {s}");
            }
            match out {
                Some(path) => emit_fits_csv(&fits, &path),
                None => write_fits(io::stdout().lock(), &fits),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
