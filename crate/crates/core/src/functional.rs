//! Nonlinear functionals on `L²_p([0, 2π])`, their Fréchet derivatives and
//! functional-derivative kernels, and their cylindrical restrictions
//! `f(a) = F([Σ a_k φ_k])`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use crate::basis::BasisSpec;
use crate::error::{invalid, Result};
use crate::grid::{dot, inner_product, GridFunction, UniformGrid};
use crate::projection::{CoefficientVector, Projector};
use crate::spectrum::FourierSpectrum;

/// A differentiable functional evaluated by quadrature on the grid that
/// carries its argument.
pub trait FunctionalModel: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    /// `F([θ])`.
    fn evaluate(&self, theta: &GridFunction) -> f64;

    /// `F'([θ]) η`.
    fn frechet_apply(&self, theta: &GridFunction, eta: &GridFunction) -> Result<f64>;

    /// The kernel `δF/δθ(x)` of `F'([θ])`.
    fn derivative_field(&self, theta: &GridFunction) -> GridFunction;

    /// An upper bound on `|F([θ])|` valid for every `θ`.
    fn sup_norm(&self) -> f64;

    /// Solution `F([θ], t) = F([θ(· − t)])` of the advection Hopf equation
    /// with this functional as initial condition.
    fn exact_evolution(&self, theta: &FourierSpectrum, t: f64, grid: &UniformGrid) -> f64 {
        self.evaluate(&theta.shift(t).eval_on_grid(grid))
    }
}

/// `F([θ]) = ∫ sin(x) sin²(θ(x)) dx`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SinSq;

/// `F([θ]) = ∫ sin²(θ(x)) dx`, invariant under translations of `θ`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SinSqInvariant;

/// `F([θ]) = π / (π + (θ, sin)²)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CauchySin;

fn check_shared(theta: &GridFunction, eta: &GridFunction) -> Result<()> {
    if theta.grid() != eta.grid() {
        return Err(invalid(format!(
            "θ and η live on different grids ({} vs {} points)",
            theta.grid().n_points(),
            eta.grid().n_points()
        )));
    }
    Ok(())
}

impl FunctionalModel for SinSq {
    fn name(&self) -> &'static str {
        "sinsq"
    }

    fn evaluate(&self, theta: &GridFunction) -> f64 {
        let g = theta.grid();
        g.weight()
            * g.nodes()
                .iter()
                .zip(theta.values())
                .map(|(x, v)| x.sin() * v.sin().powi(2))
                .sum::<f64>()
    }

    fn frechet_apply(&self, theta: &GridFunction, eta: &GridFunction) -> Result<f64> {
        check_shared(theta, eta)?;
        let g = theta.grid();
        Ok(g.weight()
            * g.nodes()
                .iter()
                .zip(theta.values())
                .zip(eta.values())
                .map(|((x, v), e)| x.sin() * (2.0 * v).sin() * e)
                .sum::<f64>())
    }

    fn derivative_field(&self, theta: &GridFunction) -> GridFunction {
        let values = theta
            .grid()
            .nodes()
            .iter()
            .zip(theta.values())
            .map(|(x, v)| x.sin() * (2.0 * v).sin())
            .collect();
        GridFunction::new(theta.grid().clone(), values).expect("same grid")
    }

    /// `∫|sin x| dx = 4`; the advertised bound is the looser `2π`.
    fn sup_norm(&self) -> f64 {
        TAU
    }
}

impl FunctionalModel for SinSqInvariant {
    fn name(&self) -> &'static str {
        "sinsq-invariant"
    }

    fn evaluate(&self, theta: &GridFunction) -> f64 {
        theta.grid().weight() * theta.values().iter().map(|v| v.sin().powi(2)).sum::<f64>()
    }

    fn frechet_apply(&self, theta: &GridFunction, eta: &GridFunction) -> Result<f64> {
        check_shared(theta, eta)?;
        Ok(theta.grid().weight()
            * theta
                .values()
                .iter()
                .zip(eta.values())
                .map(|(v, e)| (2.0 * v).sin() * e)
                .sum::<f64>())
    }

    fn derivative_field(&self, theta: &GridFunction) -> GridFunction {
        theta.map(|v| (2.0 * v).sin())
    }

    fn sup_norm(&self) -> f64 {
        TAU
    }
}

impl CauchySin {
    fn sin_coordinate(theta: &GridFunction) -> f64 {
        let g = theta.grid();
        g.weight()
            * g.nodes()
                .iter()
                .zip(theta.values())
                .map(|(x, v)| x.sin() * v)
                .sum::<f64>()
    }

    /// `dF/ds` at `s = (θ, sin)`.
    fn slope(s: f64) -> f64 {
        -2.0 * PI * s / (PI + s * s).powi(2)
    }
}

impl FunctionalModel for CauchySin {
    fn name(&self) -> &'static str {
        "cauchy-sin"
    }

    fn evaluate(&self, theta: &GridFunction) -> f64 {
        let s = Self::sin_coordinate(theta);
        PI / (PI + s * s)
    }

    fn frechet_apply(&self, theta: &GridFunction, eta: &GridFunction) -> Result<f64> {
        check_shared(theta, eta)?;
        Ok(Self::slope(Self::sin_coordinate(theta)) * Self::sin_coordinate(eta))
    }

    fn derivative_field(&self, theta: &GridFunction) -> GridFunction {
        let c = Self::slope(Self::sin_coordinate(theta));
        theta.grid().sample(|x| c * x.sin())
    }

    fn sup_norm(&self) -> f64 {
        1.0
    }
}

/// Names accepted by [`model_by_name`].
pub const MODEL_NAMES: [&str; 3] = ["sinsq", "sinsq-invariant", "cauchy-sin"];

/// Looks up one of the shipped functionals by name.
pub fn model_by_name(name: &str) -> Result<Arc<dyn FunctionalModel>> {
    match name.trim() {
        "sinsq" => Ok(Arc::new(SinSq)),
        "sinsq-invariant" => Ok(Arc::new(SinSqInvariant)),
        "cauchy-sin" => Ok(Arc::new(CauchySin)),
        other => Err(invalid(format!(
            "unknown model `{other}` (known: {})",
            MODEL_NAMES.join(", ")
        ))),
    }
}

pub fn eval_sinsq(theta: &GridFunction) -> f64 {
    SinSq.evaluate(theta)
}

pub fn frechet_apply_sinsq(theta: &GridFunction, eta: &GridFunction) -> Result<f64> {
    SinSq.frechet_apply(theta, eta)
}

pub fn derivative_field_sinsq(theta: &GridFunction) -> GridFunction {
    SinSq.derivative_field(theta)
}

/// `F([θ], t)` for the Hopf equation of `u_t = u_x` started from `model`.
pub fn exact_fde_solution(
    model: &dyn FunctionalModel,
    theta: &FourierSpectrum,
    t: f64,
    grid: &UniformGrid,
) -> f64 {
    model.exact_evolution(theta, t, grid)
}

/// A real function of a coordinate vector `a ∈ R^d`.
pub trait CoordinateFunction: Sync {
    fn dim(&self) -> usize;

    fn eval(&self, a: &[f64]) -> f64;

    /// Coordinates the function actually depends on.
    fn support(&self) -> Vec<usize> {
        (0..self.dim()).collect()
    }
}

/// Adapts a closure to [`CoordinateFunction`].
pub struct FnCoordinate<F> {
    dim: usize,
    support: Option<Vec<usize>>,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnCoordinate<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self {
            dim,
            support: None,
            f,
        }
    }

    /// Declares that `f` depends only on the listed coordinates.
    pub fn with_support(mut self, support: Vec<usize>) -> Self {
        self.support = Some(support);
        self
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> CoordinateFunction for FnCoordinate<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, a: &[f64]) -> f64 {
        (self.f)(a)
    }

    fn support(&self) -> Vec<usize> {
        self.support
            .clone()
            .unwrap_or_else(|| (0..self.dim).collect())
    }
}

/// Restriction of a functional to `D_m`: `f(a) = F([Σ a_k φ_k])`.
#[derive(Debug, Clone)]
pub struct CylindricalFunction {
    model: Arc<dyn FunctionalModel>,
    projector: Arc<Projector>,
}

impl CylindricalFunction {
    pub fn new(
        model: Arc<dyn FunctionalModel>,
        basis: BasisSpec,
        quad: &UniformGrid,
    ) -> Result<Self> {
        Ok(Self {
            model,
            projector: Arc::new(Projector::new(basis, quad)?),
        })
    }

    pub fn from_projector(model: Arc<dyn FunctionalModel>, projector: Arc<Projector>) -> Self {
        Self { model, projector }
    }

    pub fn model(&self) -> &dyn FunctionalModel {
        self.model.as_ref()
    }

    pub fn projector(&self) -> &Projector {
        &self.projector
    }

    pub fn basis(&self) -> &BasisSpec {
        self.projector.basis()
    }

    pub fn evaluate(&self, a: &CoefficientVector) -> Result<f64> {
        Ok(self.model.evaluate(&self.projector.synthesize(a)?))
    }

    /// `F([P_m θ])`.
    pub fn evaluate_projected(&self, theta: &FourierSpectrum) -> f64 {
        let a = self
            .projector
            .project(theta)
            .expect("spectrum projects on any grid");
        self.model
            .evaluate(&self.projector.synthesize_slice(a.as_slice()))
    }
}

impl CoordinateFunction for CylindricalFunction {
    fn dim(&self) -> usize {
        self.projector.basis().len()
    }

    fn eval(&self, a: &[f64]) -> f64 {
        self.model.evaluate(&self.projector.synthesize_slice(a))
    }
}

/// `∂f/∂a_k = (δF/δθ [Σ a_j φ_j], φ_k)` for a cylindrical function.
pub fn gradient_wrt_coeffs(f: &CylindricalFunction, a: &CoefficientVector) -> Result<Vec<f64>> {
    let theta = f.projector.synthesize(a)?;
    let field = f.model.derivative_field(&theta);
    let w = field.grid().weight();
    Ok((0..f.basis().len())
        .map(|k| w * dot(field.values(), f.projector.basis_values(k)))
        .collect())
}

/// Checks `F'([θ])η` against `(δF/δθ, η)`; returns the absolute discrepancy.
pub fn riesz_defect(
    model: &dyn FunctionalModel,
    theta: &GridFunction,
    eta: &GridFunction,
) -> Result<f64> {
    let direct = model.frechet_apply(theta, eta)?;
    let via_field = inner_product(&model.derivative_field(theta), eta)?;
    Ok((direct - via_field).abs())
}
