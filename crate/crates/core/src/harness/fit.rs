//! Least-squares decay rates of convergence records.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

use super::{ConvergenceRecord, ExperimentKind};

/// Records with errors below this value are left out of fits.
pub const FIT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// Slope of `log(error)` against `log(m)`.
    Algebraic,
    /// Slope of `log(error)` against `m`.
    Exponential,
}

impl FitModel {
    pub fn as_str(self) -> &'static str {
        match self {
            FitModel::Algebraic => "algebraic",
            FitModel::Exponential => "exponential",
        }
    }

    /// The fit that matches a spectrum law name.
    pub fn for_law(law: &str) -> Result<Self> {
        law.parse()
    }
}

impl fmt::Display for FitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FitModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "algebraic" | "power" | "loglog" => Ok(FitModel::Algebraic),
            "exponential" | "exp" | "semilog" => Ok(FitModel::Exponential),
            other => Err(invalid(format!("unknown fit model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub model: FitModel,
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination, in `[0, 1]`.
    pub r2: f64,
    pub m_lo: usize,
    pub m_hi: usize,
    pub points: usize,
}

/// Fits every record; all errors must be positive.
pub fn fit_rate(records: &[ConvergenceRecord], model: FitModel) -> Result<RateFit> {
    if records.len() < 3 {
        return Err(Error::FitUndefined(format!(
            "need at least 3 records, got {}",
            records.len()
        )));
    }
    if let Some(r) = records
        .iter()
        .find(|r| !r.error.is_finite() || r.error <= 0.0)
    {
        return Err(Error::FitUndefined(format!(
            "error {} at m = {} cannot be logged",
            r.error, r.m
        )));
    }
    let xs: Vec<f64> = records
        .iter()
        .map(|r| match model {
            FitModel::Algebraic => (r.m as f64).ln(),
            FitModel::Exponential => r.m as f64,
        })
        .collect();
    let ys: Vec<f64> = records.iter().map(|r| r.error.ln()).collect();
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let syy: f64 = ys.iter().map(|y| (y - ym).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::FitUndefined("all records share the same m".into()));
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(RateFit {
        model,
        slope,
        intercept,
        r2,
        m_lo: records.iter().map(|r| r.m).min().unwrap_or(0),
        m_hi: records.iter().map(|r| r.m).max().unwrap_or(0),
        points: records.len(),
    })
}

/// Fits the records at or above [`FIT_FLOOR`].
pub fn fit_sweep(records: &[ConvergenceRecord], model: FitModel) -> Result<RateFit> {
    let kept: Vec<ConvergenceRecord> = records
        .iter()
        .filter(|r| r.error >= FIT_FLOOR)
        .cloned()
        .collect();
    fit_rate(&kept, model)
}

/// A fit of one sweep, labelled for the fits CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    pub experiment: ExperimentKind,
    pub law: String,
    pub param: f64,
    pub fit: RateFit,
}

/// Groups records into sweeps (same experiment, law, parameter, basis, `t`
/// and seed, in order of first appearance) and fits each one. `model`
/// defaults to the fit matching each sweep's law. Sweeps that cannot be fitted
/// are returned as messages.
pub fn fit_groups(
    records: &[ConvergenceRecord],
    model: Option<FitModel>,
) -> (Vec<FitRow>, Vec<String>) {
    let mut groups: Vec<Vec<ConvergenceRecord>> = Vec::new();
    for r in records {
        let same = |g: &Vec<ConvergenceRecord>| {
            let h = &g[0];
            h.experiment == r.experiment
                && h.law == r.law
                && h.param.to_bits() == r.param.to_bits()
                && h.basis == r.basis
                && h.t.map(f64::to_bits) == r.t.map(f64::to_bits)
                && h.seed == r.seed
        };
        match groups.iter_mut().find(|g| same(g)) {
            Some(g) => g.push(r.clone()),
            None => groups.push(vec![r.clone()]),
        }
    }
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for mut g in groups {
        g.sort_by_key(|r| r.m);
        let head = &g[0];
        let label = format!("{} {}({})", head.experiment, head.law, head.param);
        let fitted = match model {
            Some(m) => Ok(m),
            None => FitModel::for_law(&head.law),
        }
        .and_then(|m| fit_sweep(&g, m));
        match fitted {
            Ok(fit) => rows.push(FitRow {
                experiment: head.experiment,
                law: head.law.clone(),
                param: head.param,
                fit,
            }),
            Err(e) => skipped.push(format!("{label}: {e}")),
        }
    }
    (rows, skipped)
}
