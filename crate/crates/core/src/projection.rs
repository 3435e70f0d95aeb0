//! The orthogonal projection `P_m θ = Σ_k (θ, φ_k) φ_k` onto `D_m`.

use crate::basis::BasisSpec;
use crate::error::{invalid, Error, Result};
use crate::grid::{dot, GridFunction, UniformGrid};
use crate::spectrum::FourierSpectrum;

/// Slack below zero tolerated (and clamped) in [`tail_energy`], relative to
/// `1 + ‖θ‖²`.
const TAIL_ENERGY_GUARD: f64 = 1e-12;

/// Coordinates of an element of `D_m` in a given basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    basis: BasisSpec,
    a: Vec<f64>,
}

impl CoefficientVector {
    pub fn new(basis: BasisSpec, a: Vec<f64>) -> Result<Self> {
        if a.len() != basis.len() {
            return Err(invalid(format!(
                "{} coefficients supplied for a basis of {} functions",
                a.len(),
                basis.len()
            )));
        }
        Ok(Self { basis, a })
    }

    pub fn zeros(basis: BasisSpec) -> Self {
        Self {
            a: vec![0.0; basis.len()],
            basis,
        }
    }

    /// The `k`-th unit coordinate vector.
    pub fn unit(basis: BasisSpec, k: usize) -> Result<Self> {
        let mut v = Self::zeros(basis);
        *v.a.get_mut(k)
            .ok_or_else(|| invalid(format!("unit index {k} out of range")))? = 1.0;
        Ok(v)
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.a
    }

    pub fn norm_sq(&self) -> f64 {
        dot(&self.a, &self.a)
    }
}

/// A function to be projected: either its spectrum or its grid samples.
#[derive(Debug, Clone, Copy)]
pub enum Theta<'a> {
    Spectrum(&'a FourierSpectrum),
    Grid(&'a GridFunction),
}

impl<'a> From<&'a FourierSpectrum> for Theta<'a> {
    fn from(s: &'a FourierSpectrum) -> Self {
        Theta::Spectrum(s)
    }
}

impl<'a> From<&'a GridFunction> for Theta<'a> {
    fn from(g: &'a GridFunction) -> Self {
        Theta::Grid(g)
    }
}

impl Theta<'_> {
    /// Samples on `quad`, rejecting grid functions that live elsewhere.
    pub fn on_grid(&self, quad: &UniformGrid) -> Result<GridFunction> {
        match self {
            Theta::Spectrum(s) => Ok(s.eval_on_grid(quad)),
            Theta::Grid(g) if g.grid() == quad => Ok((*g).clone()),
            Theta::Grid(g) => Err(invalid(format!(
                "function sampled on {} points but quadrature grid has {}",
                g.grid().n_points(),
                quad.n_points()
            ))),
        }
    }
}

/// Basis values tabulated on a quadrature grid.
///
/// Building one is `O((m+1)·n)`; every projection or synthesis afterwards is
/// a dense matrix-vector product. Sweeps build one per `m` and share it.
#[derive(Debug, Clone)]
pub struct Projector {
    basis: BasisSpec,
    quad: UniformGrid,
    /// Row-major `(m+1) × n`.
    table: Vec<f64>,
}

impl Projector {
    pub fn new(basis: BasisSpec, quad: &UniformGrid) -> Result<Self> {
        basis.check_quadrature(quad.n_points())?;
        Ok(Self::tabulate(basis, quad))
    }

    /// Projector on the default oversampled grid for `basis`.
    pub fn with_default_quadrature(basis: BasisSpec) -> Result<Self> {
        let quad = UniformGrid::new(basis.default_quadrature_points())?;
        Self::new(basis, &quad)
    }

    fn tabulate(basis: BasisSpec, grid: &UniformGrid) -> Self {
        let mut table = Vec::with_capacity(basis.len() * grid.n_points());
        for k in 0..basis.len() {
            table.extend(grid.nodes().iter().map(|&x| basis.eval_unchecked(k, x)));
        }
        Self {
            basis,
            quad: grid.clone(),
            table,
        }
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn quadrature(&self) -> &UniformGrid {
        &self.quad
    }

    /// Samples of `φ_k` on the quadrature grid.
    pub fn basis_values(&self, k: usize) -> &[f64] {
        let n = self.quad.n_points();
        &self.table[k * n..(k + 1) * n]
    }

    /// `a_k = (θ, φ_k)` by quadrature.
    pub fn project<'a>(&self, theta: impl Into<Theta<'a>>) -> Result<CoefficientVector> {
        let samples = theta.into().on_grid(&self.quad)?;
        Ok(self.project_samples(samples.values()))
    }

    pub(crate) fn project_samples(&self, values: &[f64]) -> CoefficientVector {
        let w = self.quad.weight();
        let a = (0..self.basis.len())
            .map(|k| w * dot(self.basis_values(k), values))
            .collect();
        CoefficientVector {
            basis: self.basis,
            a,
        }
    }

    /// `Σ a_k φ_k` on the quadrature grid.
    pub fn synthesize(&self, a: &CoefficientVector) -> Result<GridFunction> {
        if a.basis != self.basis {
            return Err(invalid("coefficient vector belongs to a different basis"));
        }
        Ok(self.synthesize_slice(&a.a))
    }

    pub(crate) fn synthesize_slice(&self, a: &[f64]) -> GridFunction {
        let n = self.quad.n_points();
        let mut values = vec![0.0; n];
        for (k, &ak) in a.iter().enumerate() {
            if ak == 0.0 {
                continue;
            }
            for (v, phi) in values.iter_mut().zip(self.basis_values(k)) {
                *v += ak * phi;
            }
        }
        GridFunction::new(self.quad.clone(), values).expect("length matches grid")
    }

    /// `P_m θ` sampled on the quadrature grid.
    pub fn apply<'a>(&self, theta: impl Into<Theta<'a>>) -> Result<GridFunction> {
        let a = self.project(theta)?;
        Ok(self.synthesize_slice(&a.a))
    }

    /// Gram matrix `(φ_j, φ_k)` by quadrature, row-major.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        let w = self.quad.weight();
        (0..self.basis.len())
            .map(|j| {
                (0..self.basis.len())
                    .map(|k| w * dot(self.basis_values(j), self.basis_values(k)))
                    .collect()
            })
            .collect()
    }

    /// `‖θ‖² − Σ a_k²`, the energy outside `D_m`.
    pub fn tail_energy<'a>(&self, theta: impl Into<Theta<'a>>) -> Result<f64> {
        let samples = theta.into().on_grid(&self.quad)?;
        let a = self.project_samples(samples.values());
        let total = samples.norm_l2_sq();
        let tail = total - a.norm_sq();
        if tail >= 0.0 {
            Ok(tail)
        } else if tail > -TAIL_ENERGY_GUARD * (1.0 + total) {
            Ok(0.0)
        } else {
            Err(Error::NumericFailure(format!(
                "tail energy {tail:e} is negative beyond rounding; quadrature too coarse?"
            )))
        }
    }

    /// `‖θ − P_m θ‖_{L²}` by quadrature.
    pub fn l2_error<'a>(&self, theta: impl Into<Theta<'a>>) -> Result<f64> {
        let samples = theta.into().on_grid(&self.quad)?;
        Ok(self.l2_error_samples(&samples))
    }

    pub(crate) fn l2_error_samples(&self, samples: &GridFunction) -> f64 {
        let a = self.project_samples(samples.values());
        let proj = self.synthesize_slice(&a.a);
        samples.sub(&proj).expect("shared grid").norm_l2()
    }
}

/// Coordinates of `θ` in `basis`, inner products taken on `quad`.
pub fn project<'a>(
    theta: impl Into<Theta<'a>>,
    basis: &BasisSpec,
    quad: &UniformGrid,
) -> Result<CoefficientVector> {
    Projector::new(*basis, quad)?.project(theta)
}

/// `Σ a_k φ_k` evaluated directly on an arbitrary grid.
pub fn synthesize(a: &CoefficientVector, grid: &UniformGrid) -> GridFunction {
    let basis = a.basis;
    grid.sample(|x| {
        a.a.iter()
            .enumerate()
            .filter(|(_, ak)| **ak != 0.0)
            .map(|(k, ak)| ak * basis.eval_unchecked(k, x))
            .sum()
    })
}

pub fn tail_energy<'a>(
    theta: impl Into<Theta<'a>>,
    basis: &BasisSpec,
    quad: &UniformGrid,
) -> Result<f64> {
    Projector::new(*basis, quad)?.tail_energy(theta)
}

pub fn l2_projection_error<'a>(
    theta: impl Into<Theta<'a>>,
    basis: &BasisSpec,
    quad: &UniformGrid,
) -> Result<f64> {
    Projector::new(*basis, quad)?.l2_error(theta)
}
