//! Cylindrical approximation of the Hopf equation of linear advection,
//!
//! ```text
//! ∂F/∂t = ∫ θ(x) ∂ₓ (δF/δθ(x)) dx,    F([θ], 0) = F₀([θ]),
//! ```
//!
//! whose exact solution is `F([θ], t) = F₀([θ(· − t)])`.
//!
//! Restricted to `D_m` the equation becomes the first-order PDE
//! `∂f/∂t = Σ_k ∂f/∂a_k (Cᵀa)_k` with `C_jk = ∫ φ_j ∂ₓφ_k dx`, solved by
//! characteristics as `f(a, t) = f₀(exp(t Cᵀ) a)`.
//!
//! Orientation: the coordinates of `θ(· − t)` obey the Galerkin system
//! `da/dt = −C a = Cᵀ a` (C is skew-symmetric), so the propagator is
//! `exp(t Cᵀ) = exp(−t C)`. With this choice `f(P_m θ, t)` reproduces
//! `F₀([P_m θ(· − t)])` exactly for every `θ`.

use nalgebra::{DMatrix, DVector};

use crate::basis::BasisSpec;
use crate::error::{invalid, Error, Result};
use crate::expm::matrix_exponential;
use crate::functional::{CoordinateFunction, FunctionalModel};
use crate::grid::{dot, UniformGrid};
use crate::projection::Projector;
use crate::spectrum::FourierSpectrum;

/// `C_jk = ∫₀^{2π} φ_j ∂ₓφ_k dx` for one basis.
#[derive(Debug, Clone)]
pub struct CoefficientMatrix {
    basis: BasisSpec,
    c: DMatrix<f64>,
}

/// Assembles `C` by quadrature with analytic basis derivatives.
pub fn assemble_c(basis: &BasisSpec, quad: &UniformGrid) -> Result<CoefficientMatrix> {
    basis.check_quadrature(quad.n_points())?;
    let n = basis.len();
    let projector = Projector::new(*basis, quad)?;
    let derivs: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            quad.nodes()
                .iter()
                .map(|&x| basis.derivative_unchecked(k, x))
                .collect()
        })
        .collect();
    let w = quad.weight();
    let c = DMatrix::from_fn(n, n, |j, k| w * dot(projector.basis_values(j), &derivs[k]));
    Ok(CoefficientMatrix { basis: *basis, c })
}

impl CoefficientMatrix {
    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.c
    }

    /// Generator `Cᵀ` of the coefficient flow.
    pub fn generator(&self) -> DMatrix<f64> {
        self.c.transpose()
    }

    /// `max |C + Cᵀ|`.
    pub fn skew_defect(&self) -> f64 {
        (&self.c + self.c.transpose()).amax()
    }

    pub fn dim(&self) -> usize {
        self.c.nrows()
    }
}

/// `exp(t Cᵀ)`, the exact coefficient flow over time `t`.
#[derive(Debug, Clone)]
pub struct Propagator {
    t: f64,
    e: DMatrix<f64>,
}

impl Propagator {
    pub fn new(c: &CoefficientMatrix, t: f64) -> Result<Self> {
        Ok(Self {
            t,
            e: matrix_exponential(&c.generator(), t)?,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.e
    }

    pub fn apply(&self, a: &[f64]) -> Vec<f64> {
        (&self.e * DVector::from_column_slice(a)).data.into()
    }

    /// `max |EᵀE − I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.e.nrows();
        (self.e.transpose() * &self.e - DMatrix::<f64>::identity(n, n)).amax()
    }
}

fn check_dims(f0: &dyn CoordinateFunction, c: &CoefficientMatrix, a: &[f64]) -> Result<()> {
    if f0.dim() != c.dim() || a.len() != c.dim() {
        return Err(invalid(format!(
            "dimension mismatch: f0 takes {}, C is {}x{}, a has {}",
            f0.dim(),
            c.dim(),
            c.dim(),
            a.len()
        )));
    }
    Ok(())
}

/// `f(a, t) = f₀(exp(t Cᵀ) a)`.
pub fn solve_cylindrical(
    f0: &dyn CoordinateFunction,
    c: &CoefficientMatrix,
    a: &[f64],
    t: f64,
) -> Result<f64> {
    check_dims(f0, c, a)?;
    let prop = Propagator::new(c, t)?;
    Ok(f0.eval(&prop.apply(a)))
}

/// `f₀(E a)` with a precomputed propagator.
pub fn solve_with_propagator(
    f0: &dyn CoordinateFunction,
    prop: &Propagator,
    a: &[f64],
) -> Result<f64> {
    if f0.dim() != a.len() || prop.e.nrows() != a.len() {
        return Err(invalid("dimension mismatch between f0, propagator and a"));
    }
    Ok(f0.eval(&prop.apply(a)))
}

/// Finite-difference residual `|∂ₜf − Σ_k ∂f/∂a_k (Cᵀa)_k|` of the
/// characteristic solution at `(a, t)`.
///
/// The time derivative uses the five-point stencil and the coefficient
/// derivatives use central differences, so the residual is `O(h²)` overall and
/// exact up to rounding when `f₀` is linear.
pub fn verify_pde_residual(
    f0: &dyn CoordinateFunction,
    c: &CoefficientMatrix,
    a: &[f64],
    t: f64,
    h: f64,
) -> Result<f64> {
    check_dims(f0, c, a)?;
    if h.is_nan() || h <= 0.0 {
        return Err(invalid(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let at = Propagator::new(c, t)?;
    let at_offset =
        |s: f64| -> Result<f64> { Ok(f0.eval(&Propagator::new(c, t + s * h)?.apply(a))) };
    let dfdt = (8.0 * (at_offset(1.0)? - at_offset(-1.0)?) - (at_offset(2.0)? - at_offset(-2.0)?))
        / (12.0 * h);

    let drift = c.generator() * DVector::from_column_slice(a);
    let mut transport = 0.0;
    let mut shifted = a.to_vec();
    for k in 0..a.len() {
        if drift[k] == 0.0 {
            continue;
        }
        shifted[k] = a[k] + h;
        let plus = f0.eval(&at.apply(&shifted));
        shifted[k] = a[k] - h;
        let minus = f0.eval(&at.apply(&shifted));
        shifted[k] = a[k];
        transport += (plus - minus) / (2.0 * h) * drift[k];
    }
    Ok((dfdt - transport).abs())
}

/// Truncated consistency residual of the cylindrical approximation at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualTail {
    /// `|Σ_{l ≤ L} (δF[P_mθ], ψ_l) ∫ ∂ₓψ_l θ dx|`.
    pub value: f64,
    /// The same sum transported by `P_mθ` instead of `θ`. Zero up to rounding
    /// for trigonometric bases, because `∂ₓ P_mθ` stays in `D_m`.
    pub projected_sum: f64,
    /// Number of extension functions `L`.
    pub tail_modes: usize,
}

/// Default number of extension functions, `4(m+1)`.
pub fn default_tail_modes(basis: &BasisSpec) -> usize {
    4 * basis.len()
}

/// Residual of the `D_m` truncation against the real Fourier functions
/// `ψ_l` beyond `D_m` (`sin((M+1)x)/√π, cos((M+1)x)/√π, sin((M+2)x)/√π, …`).
///
/// The field coefficients `(δF[P_mθ], ψ_l)` come from quadrature on `quad`;
/// the transport integrals `∫ ∂ₓψ_l θ` are read off the spectrum of `θ`.
pub fn residual_tail(
    theta: &FourierSpectrum,
    model: &dyn FunctionalModel,
    basis: &BasisSpec,
    tail_modes: usize,
    quad: &UniformGrid,
) -> Result<ResidualTail> {
    if tail_modes == 0 {
        return Err(invalid("tail_modes must be positive"));
    }
    let top = basis.max_frequency() + tail_modes.div_ceil(2);
    if quad.n_points() <= 2 * top + 1 {
        return Err(invalid(format!(
            "quadrature grid of {} points cannot resolve extension frequency {top}",
            quad.n_points()
        )));
    }
    let projector = Projector::new(*basis, quad)?;
    let a = projector.project(theta)?;
    let projected = projector.synthesize_slice(a.as_slice());
    let field = model.derivative_field(&projected);

    let w = quad.weight();
    let root_pi = std::f64::consts::PI.sqrt();
    let (mut value, mut projected_sum) = (0.0, 0.0);
    for l in 1..=tail_modes {
        let k = basis.max_frequency() + l.div_ceil(2);
        let freq = k as f64;
        let odd = l % 2 == 1;
        let (mut coef, mut transport_projected) = (0.0, 0.0);
        for ((&x, f), p) in quad
            .nodes()
            .iter()
            .zip(field.values())
            .zip(projected.values())
        {
            let (s, c) = (freq * x).sin_cos();
            let (psi, dpsi) = if odd { (s, freq * c) } else { (c, -freq * s) };
            coef += f * psi;
            transport_projected += dpsi * p;
        }
        coef *= w / root_pi;
        transport_projected *= w / root_pi;
        // θ = c₀ + 2 Σ Re(c_k e^{ikx}): ∫ k cos(kx) θ = 2πk Re c_k, ∫ −k sin(kx) θ = 2πk Im c_k
        let ck = theta.coeff(k);
        let transport = 2.0 * root_pi * freq * if odd { ck.re } else { ck.im };
        value += coef * transport;
        projected_sum += coef * transport_projected;
    }
    if !value.is_finite() || !projected_sum.is_finite() {
        return Err(Error::NumericFailure("non-finite residual tail".into()));
    }
    Ok(ResidualTail {
        value: value.abs(),
        projected_sum: projected_sum.abs(),
        tail_modes,
    })
}
