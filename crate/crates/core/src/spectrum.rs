//! Random periodic test functions with prescribed spectral decay.
//!
//! A real function is stored through its nonnegative Fourier modes,
//! `θ(x) = c_0 + Σ_{k≠0} c_k e^{ikx}` with `c_{−k} = conj(c_k)`.
//!
//! # Random streams
//!
//! Every sampled function has its own ChaCha20 stream: sample `i` of a law
//! with seed `s` is drawn from `ChaCha20Rng::seed_from_u64(s)` switched to
//! stream `i`. Ensembles therefore do not depend on how the samples are
//! scheduled across threads. The second ensemble used by the Fréchet sweep
//! starts at stream [`SECONDARY_STREAM_OFFSET`].
//!
//! Within a stream the draws are `c_0`, then `(u_k, ϑ_k)` for `k = 1..=N`.

use std::f64::consts::TAU;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{invalid, Error, Result};
use crate::grid::{GridFunction, UniformGrid};

/// Stream index of the first sample of a secondary ensemble.
pub const SECONDARY_STREAM_OFFSET: u64 = 1 << 32;

/// Nonnegative-mode Fourier coefficients of a real periodic function.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    coeffs: Vec<Complex64>,
}

impl FourierSpectrum {
    /// `coeffs[k] = c_k` for `k = 0..=N`; `c_0` must be real.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("a spectrum needs at least the mean coefficient"));
        }
        if coeffs[0].im != 0.0 {
            return Err(invalid(format!(
                "mean coefficient must be real, got imaginary part {}",
                coeffs[0].im
            )));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(invalid("spectrum has non-finite coefficients"));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(max_mode: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); max_mode + 1],
        }
    }

    /// Spectrum of `c0 + Σ_l (s_l sin(lx) + k_l cos(lx))`.
    pub fn from_sin_cos(c0: f64, sin: &[f64], cos: &[f64]) -> Self {
        let n = sin.len().max(cos.len());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[0] = Complex64::new(c0, 0.0);
        for (l, c) in coeffs.iter_mut().enumerate().skip(1) {
            let s = sin.get(l - 1).copied().unwrap_or(0.0);
            let k = cos.get(l - 1).copied().unwrap_or(0.0);
            // s sin + k cos = 2 Re((k/2 − i s/2) e^{ilx})
            *c = Complex64::new(0.5 * k, -0.5 * s);
        }
        Self { coeffs }
    }

    /// Largest mode `N`.
    pub fn max_mode(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Keeps modes `0..=max_mode` (exact Fourier truncation).
    pub fn truncate(&self, max_mode: usize) -> Self {
        let keep = (max_mode + 1).min(self.coeffs.len());
        Self {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    /// Point value `c_0 + 2 Σ Re(c_k e^{ikx})`.
    pub fn eval_at(&self, x: f64) -> f64 {
        let tail: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| {
                let (s, co) = (k as f64 * x).sin_cos();
                c.re * co - c.im * s
            })
            .sum();
        self.coeffs[0].re + 2.0 * tail
    }

    /// Samples the function on `grid`.
    pub fn eval_on_grid(&self, grid: &UniformGrid) -> GridFunction {
        let n = grid.n_points();
        let (cos, sin) = grid.twiddles();
        let c0 = self.coeffs[0].re;
        let values = (0..n)
            .map(|j| {
                let mut idx = 0usize;
                let mut acc = 0.0;
                for c in &self.coeffs[1..] {
                    idx += j;
                    if idx >= n {
                        idx -= n;
                    }
                    acc += c.re * cos[idx] - c.im * sin[idx];
                }
                c0 + 2.0 * acc
            })
            .collect();
        GridFunction::new(grid.clone(), values).expect("length matches grid")
    }

    /// Translation `θ(x − t)`: `c_k ← c_k e^{−ikt}`.
    pub fn shift(&self, t: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k == 0 {
                    *c
                } else {
                    let (s, co) = (k as f64 * t).sin_cos();
                    c * Complex64::new(co, -s)
                }
            })
            .collect();
        Self { coeffs }
    }

    /// `‖θ‖²_{L²} = 2π (c_0² + 2 Σ |c_k|²)`.
    pub fn l2_norm_sq(&self) -> f64 {
        let tail: f64 = self.coeffs[1..].iter().map(|c| c.norm_sqr()).sum();
        TAU * (self.coeffs[0].re.powi(2) + 2.0 * tail)
    }

    /// `c_0² + 2 Σ_k (1 + k² + … + k^{2s}) |c_k|²`.
    pub fn sobolev_norm_sq(&self, s: u32) -> Result<f64> {
        sobolev_norm_sq(self, s)
    }
}

/// Periodic Sobolev norm squared of order `s ≥ 1`, without the `2π` factor.
pub fn sobolev_norm_sq(spectrum: &FourierSpectrum, s: u32) -> Result<f64> {
    if s == 0 {
        return Err(invalid("Sobolev index must be at least 1"));
    }
    let tail: f64 = spectrum.coeffs[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k2 = ((i + 1) as f64).powi(2);
            let mut weight = 0.0;
            let mut power = 1.0;
            for _ in 0..=s {
                weight += power;
                power *= k2;
            }
            weight * c.norm_sqr()
        })
        .sum();
    Ok(spectrum.coeffs[0].re.powi(2) + 2.0 * tail)
}

/// Shape of the amplitude decay `|c_k| = u_k / d(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// `d(k) = k^α`, `α ≥ 1`.
    Algebraic { alpha: f64 },
    /// `d(k) = β^k`, `β > 1`.
    Exponential { beta: f64 },
}

impl Decay {
    pub fn algebraic(alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0 && alpha.is_finite()) {
            return Err(invalid(format!("algebraic decay needs α ≥ 1, got {alpha}")));
        }
        Ok(Decay::Algebraic { alpha })
    }

    pub fn exponential(beta: f64) -> Result<Self> {
        if !(beta > 1.0 && beta.is_finite()) {
            return Err(invalid(format!(
                "exponential decay needs β > 1, got {beta}"
            )));
        }
        Ok(Decay::Exponential { beta })
    }

    /// Builds from a law name (`algebraic` / `exponential`) and its parameter.
    pub fn from_name(name: &str, param: f64) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "algebraic" | "power" | "powerlaw" => Self::algebraic(param),
            "exponential" | "exp" => Self::exponential(param),
            other => Err(invalid(format!("unknown spectrum law `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Decay::Algebraic { .. } => "algebraic",
            Decay::Exponential { .. } => "exponential",
        }
    }

    pub fn param(&self) -> f64 {
        match *self {
            Decay::Algebraic { alpha } => alpha,
            Decay::Exponential { beta } => beta,
        }
    }

    fn denominator(&self, k: usize) -> f64 {
        match *self {
            Decay::Algebraic { alpha } => (k as f64).powf(alpha),
            // overflows to +inf for large k, which zeroes the amplitude
            Decay::Exponential { beta } => (k as f64 * beta.ln()).exp(),
        }
    }
}

impl fmt::Display for Decay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.param())
    }
}

/// A seeded random-spectrum distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumLaw {
    pub decay: Decay,
    pub max_mode: usize,
    /// Range of the amplitude factors `u_k`, `k ≥ 1`.
    pub amplitude_range: (f64, f64),
    /// Range of the mean `c_0`.
    pub mean_range: (f64, f64),
    pub seed: u64,
}

/// Default number of modes of sampled functions.
pub const DEFAULT_MAX_MODE: usize = 1000;

impl SpectrumLaw {
    pub fn new(decay: Decay, max_mode: usize, seed: u64) -> Result<Self> {
        if max_mode == 0 {
            return Err(invalid("a spectrum law needs at least one mode"));
        }
        Ok(Self {
            decay,
            max_mode,
            amplitude_range: (0.0, 10.0),
            mean_range: (-10.0, 10.0),
            seed,
        })
    }

    /// Random stream for sample `index`.
    pub fn stream(&self, index: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// Sample `index` of this law.
    pub fn sample(&self, index: u64) -> FourierSpectrum {
        sample_spectrum(self, &mut self.stream(index))
    }

    /// Samples `0..count` starting at stream `first`.
    pub fn ensemble(&self, first: u64, count: usize) -> Vec<FourierSpectrum> {
        (0..count as u64).map(|i| self.sample(first + i)).collect()
    }
}

/// Draws one spectrum from `law` using `rng`.
pub fn sample_spectrum<R: Rng + ?Sized>(law: &SpectrumLaw, rng: &mut R) -> FourierSpectrum {
    let (mlo, mhi) = law.mean_range;
    let (alo, ahi) = law.amplitude_range;
    let mut coeffs = Vec::with_capacity(law.max_mode + 1);
    let c0 = mlo + (mhi - mlo) * rng.random::<f64>();
    coeffs.push(Complex64::new(c0, 0.0));
    for k in 1..=law.max_mode {
        let u = alo + (ahi - alo) * rng.random::<f64>();
        let phase = TAU * rng.random::<f64>();
        let amp = u / law.decay.denominator(k);
        coeffs.push(Complex64::from_polar(amp, phase));
    }
    FourierSpectrum { coeffs }
}

/// A spectrum together with the law that produced it, as stored on disk.
///
/// ```text
/// # cylapprox spectrum
/// kind algebraic
/// param 2
/// N 3
/// seed 42
/// k re im
/// 0 1.5 0
/// 1 0.25 -0.75
/// ...
/// ```
///
/// `kind` is `none` (with `param 0`, `seed 0`) for spectra not drawn from a
/// law. Floats are written in shortest round-trip form, so reading a file
/// back reproduces the coefficients bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumFile {
    pub law: Option<SpectrumLaw>,
    pub spectrum: FourierSpectrum,
}

impl SpectrumFile {
    pub fn to_text(&self) -> String {
        let mut out = String::from("# cylapprox spectrum\n");
        let (kind, param, seed) = match &self.law {
            Some(law) => (law.decay.name(), law.decay.param(), law.seed),
            None => ("none", 0.0, 0),
        };
        let _ = writeln!(out, "kind {kind}");
        let _ = writeln!(out, "param {param}");
        let _ = writeln!(out, "N {}", self.spectrum.max_mode());
        let _ = writeln!(out, "seed {seed}");
        out.push_str("k re im\n");
        for (k, c) in self.spectrum.coeffs.iter().enumerate() {
            let _ = writeln!(out, "{k} {} {}", c.re, c.im);
        }
        out
    }
}

impl FromStr for SpectrumFile {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let mut header = |key: &str| -> Result<String> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing `{key}` header")))?;
            let (k, v) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::Parse(format!("malformed header line `{line}`")))?;
            if k != key {
                return Err(Error::Parse(format!(
                    "expected `{key}` header, found `{k}`"
                )));
            }
            Ok(v.trim().to_string())
        };
        let kind = header("kind")?;
        let param: f64 = parse_num(&header("param")?)?;
        let max_mode: usize = parse_num(&header("N")?)?;
        let seed: u64 = parse_num(&header("seed")?)?;
        let columns = header("k")?;
        if columns.split_whitespace().collect::<Vec<_>>() != ["re", "im"] {
            return Err(Error::Parse(format!(
                "unexpected column header `k {columns}`"
            )));
        }

        let mut coeffs = Vec::with_capacity(max_mode + 1);
        for (expected, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!("expected `k re im`, found `{line}`")));
            }
            let k: usize = parse_num(fields[0])?;
            if k != expected {
                return Err(Error::Parse(format!(
                    "mode {k} out of order, expected {expected}"
                )));
            }
            coeffs.push(Complex64::new(parse_num(fields[1])?, parse_num(fields[2])?));
        }
        if coeffs.len() != max_mode + 1 {
            return Err(Error::Parse(format!(
                "header declares N = {max_mode} but {} modes follow",
                coeffs.len()
            )));
        }
        let spectrum = FourierSpectrum::new(coeffs)?;
        let law = match kind.as_str() {
            "none" => None,
            name => Some(SpectrumLaw::new(
                Decay::from_name(name, param)?,
                max_mode,
                seed,
            )?),
        };
        Ok(Self { law, spectrum })
    }
}

fn parse_num<T: FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("cannot parse number `{s}`")))
}
