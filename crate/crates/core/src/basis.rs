//! Orthonormal bases of trigonometric polynomials on `[0, 2π)`.
//!
//! Both families span the same space `D_m` of trigonometric polynomials of
//! degree at most `m/2` (dimension `m + 1`):
//!
//! * [`BasisKind::TrigCardinal`]: the normalized Dirichlet kernels centred at
//!   the `m + 1` equispaced points `x_k = 2πk/(m+1)`,
//!   `φ_k(x) = sin((m+1)(x−x_k)/2) / (√(2π(m+1)) sin((x−x_k)/2))`.
//! * [`BasisKind::RealFourier`]: `1/√(2π)` followed by interleaved
//!   `sin(lx)/√π, cos(lx)/√π` for `l = 1..=m/2`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Below this value of `|sin((x − x_k)/2)|` the cardinal function is
/// evaluated through its removable-singularity limit.
pub const SINGULARITY_THRESHOLD: f64 = 1e-8;

/// Below this value of `|sin((x − x_k)/2)|` the cardinal derivative is summed
/// mode by mode; the closed form cancels badly near the centre.
const DERIVATIVE_SERIES_THRESHOLD: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    TrigCardinal,
    RealFourier,
}

impl BasisKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::TrigCardinal => "cardinal",
            BasisKind::RealFourier => "fourier",
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cardinal" | "trigcardinal" | "trig-cardinal" => Ok(BasisKind::TrigCardinal),
            "fourier" | "realfourier" | "real-fourier" => Ok(BasisKind::RealFourier),
            other => Err(invalid(format!("unknown basis kind `{other}`"))),
        }
    }
}

/// A basis family together with its index `m` of the last basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisSpec {
    kind: BasisKind,
    m: usize,
}

impl BasisSpec {
    /// Both families need `m` even: `m + 1` cardinal points, or `m = 2M`
    /// Fourier modes.
    pub fn new(kind: BasisKind, m: usize) -> Result<Self> {
        if !m.is_multiple_of(2) {
            return Err(invalid(format!("{kind} basis requires even m, got {m}")));
        }
        Ok(Self { kind, m })
    }

    pub fn trig_cardinal(m: usize) -> Result<Self> {
        Self::new(BasisKind::TrigCardinal, m)
    }

    pub fn real_fourier(m: usize) -> Result<Self> {
        Self::new(BasisKind::RealFourier, m)
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of basis functions, `m + 1`.
    pub fn len(&self) -> usize {
        self.m + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Highest Fourier frequency in the span, `m / 2`.
    pub fn max_frequency(&self) -> usize {
        self.m / 2
    }

    /// Default quadrature size, `max(8(m+1), 256)`.
    pub fn default_quadrature_points(&self) -> usize {
        (8 * self.len()).max(256)
    }

    /// Smallest quadrature grid accepted for projection and assembly.
    pub fn min_quadrature_points(&self) -> usize {
        2 * self.len()
    }

    pub(crate) fn check_quadrature(&self, n_points: usize) -> Result<()> {
        if n_points < self.min_quadrature_points() {
            return Err(invalid(format!(
                "quadrature grid of {n_points} points undersamples the {} basis with m = {} (need at least {})",
                self.kind,
                self.m,
                self.min_quadrature_points()
            )));
        }
        Ok(())
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.len() {
            return Err(invalid(format!(
                "basis index {k} out of range for {} functions",
                self.len()
            )));
        }
        Ok(())
    }

    /// Value of `φ_k(x)`.
    pub fn eval(&self, k: usize, x: f64) -> Result<f64> {
        self.check_index(k)?;
        Ok(self.eval_unchecked(k, x))
    }

    /// Value of `dφ_k/dx (x)`.
    pub fn eval_derivative(&self, k: usize, x: f64) -> Result<f64> {
        self.check_index(k)?;
        Ok(self.derivative_unchecked(k, x))
    }

    pub(crate) fn eval_unchecked(&self, k: usize, x: f64) -> f64 {
        match self.kind {
            BasisKind::TrigCardinal => cardinal(self.m, k, x),
            BasisKind::RealFourier => fourier_mode(k, x),
        }
    }

    pub(crate) fn derivative_unchecked(&self, k: usize, x: f64) -> f64 {
        match self.kind {
            BasisKind::TrigCardinal => cardinal_derivative(self.m, k, x),
            BasisKind::RealFourier => fourier_mode_derivative(k, x),
        }
    }
}

/// Evaluates basis function `k` of `basis` at `x`.
pub fn eval_basis(basis: &BasisSpec, k: usize, x: f64) -> Result<f64> {
    basis.eval(k, x)
}

fn cardinal_offset(m: usize, k: usize, x: f64) -> f64 {
    x - TAU * k as f64 / (m + 1) as f64
}

fn cardinal(m: usize, k: usize, x: f64) -> f64 {
    let np1 = (m + 1) as f64;
    let y = cardinal_offset(m, k, x);
    let s = (0.5 * y).sin();
    if s.abs() < SINGULARITY_THRESHOLD {
        (np1 / TAU).sqrt() * (0.5 * np1 * y).cos() / (0.5 * y).cos()
    } else {
        (0.5 * np1 * y).sin() / (s * (TAU * np1).sqrt())
    }
}

fn cardinal_derivative(m: usize, k: usize, x: f64) -> f64 {
    let np1 = (m + 1) as f64;
    let y = cardinal_offset(m, k, x);
    let s = (0.5 * y).sin();
    let dirichlet_prime = if s.abs() < DERIVATIVE_SERIES_THRESHOLD {
        // D(y) = Σ_{|l|≤m/2} e^{ily}  ⇒  D'(y) = −2 Σ_{l≥1} l sin(ly)
        -2.0 * (1..=m / 2)
            .map(|l| l as f64 * (l as f64 * y).sin())
            .sum::<f64>()
    } else {
        let c = (0.5 * y).cos();
        (0.5 * np1 * (0.5 * np1 * y).cos() * s - 0.5 * (0.5 * np1 * y).sin() * c) / (s * s)
    };
    dirichlet_prime / (TAU * np1).sqrt()
}

fn fourier_mode(k: usize, x: f64) -> f64 {
    if k == 0 {
        return 1.0 / TAU.sqrt();
    }
    let l = k.div_ceil(2) as f64;
    if k % 2 == 1 {
        (l * x).sin() / PI.sqrt()
    } else {
        (l * x).cos() / PI.sqrt()
    }
}

fn fourier_mode_derivative(k: usize, x: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let l = k.div_ceil(2) as f64;
    if k % 2 == 1 {
        l * (l * x).cos() / PI.sqrt()
    } else {
        -l * (l * x).sin() / PI.sqrt()
    }
}
