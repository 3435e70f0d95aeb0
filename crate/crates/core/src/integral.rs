//! Integrals of cylindrical functions against the standard Gaussian measure
//! on the coordinates of `D_m`:
//!
//! ```text
//! ∫ f dμ = (2π)^{−d/2} ∫_{R^d} f(a) exp(−|a|²/2) da.
//! ```
//!
//! Tensor Gauss–Hermite quadrature runs only over the coordinates a function
//! declares in [`CoordinateFunction::support`]; the other factors integrate
//! to one. Monte Carlo draws all `d` coordinates.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::basis::BasisSpec;
use crate::error::{invalid, Error, Result};
use crate::functional::{model_by_name, CoordinateFunction, CylindricalFunction};
use crate::grid::{dot, make_grid};
use crate::projection::Projector;

/// Largest number of active coordinates allowed for tensor Gauss–Hermite.
pub const MAX_TENSOR_DIMS: usize = 6;

/// Largest number of tensor nodes evaluated by one quadrature.
pub const MAX_TENSOR_NODES: u64 = 1 << 26;

/// Default Monte Carlo sample count.
pub const DEFAULT_MC_SAMPLES: usize = 100_000;

/// Samples per Monte Carlo shard; shard `j` uses ChaCha stream `j`.
const MC_SHARD: usize = 8192;

/// Tensor nodes summed per parallel task.
const TENSOR_CHUNK: usize = 4096;

/// Gauss–Hermite rule for the probabilists' weight `e^{−x²/2}/√(2π)`.
///
/// Nodes are computed for the physicists' weight `e^{−x²}` by Newton's method
/// on the orthonormal Hermite recurrence, then mapped with `x ↦ √2 x` and
/// `w ↦ w/√π` so the weights sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(invalid("Gauss–Hermite order must be positive"));
        }
        let n = order;
        let nf = n as f64;
        let pim4 = std::f64::consts::PI.powf(-0.25);
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        let mut z = 0.0f64;
        for i in 0..n.div_ceil(2) {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * x[0],
                3 => 1.91 * z - 0.91 * x[1],
                _ => 2.0 * z - x[i - 2],
            };
            let mut converged = false;
            let mut pp = 0.0;
            for _ in 0..100 {
                let (mut p1, mut p2) = (pim4, 0.0);
                for j in 1..=n {
                    let jf = j as f64;
                    let p3 = p2;
                    p2 = p1;
                    p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
                }
                pp = (2.0 * nf).sqrt() * p2;
                let step = p1 / pp;
                z -= step;
                if step.abs() <= 1e-15 * z.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::NumericFailure(format!(
                    "Gauss–Hermite node {i} of order {n} did not converge"
                )));
            }
            x[i] = z;
            x[n - 1 - i] = -z;
            w[i] = 2.0 / (pp * pp);
            w[n - 1 - i] = w[i];
        }
        let root2 = std::f64::consts::SQRT_2;
        let root_pi = std::f64::consts::PI.sqrt();
        // ascending order
        let nodes = x.iter().rev().map(|v| v * root2).collect();
        let weights = w.iter().rev().map(|v| v / root_pi).collect();
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// One-dimensional `E[g(Z)]`, `Z ~ N(0, 1)`.
    pub fn expectation<G: Fn(f64) -> f64>(&self, g: G) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationMethod {
    /// Tensor Gauss–Hermite with `order` nodes per active coordinate.
    GaussHermite {
        order: usize,
    },
    MonteCarlo {
        samples: usize,
        seed: u64,
    },
}

impl IntegrationMethod {
    pub fn name(&self) -> &'static str {
        match self {
            IntegrationMethod::GaussHermite { .. } => "gauss-hermite",
            IntegrationMethod::MonteCarlo { .. } => "monte-carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub estimate: f64,
    /// Sample standard error; zero for quadrature.
    pub stderr: f64,
}

/// `∫ f dμ` over `R^{f.dim()}`.
pub fn integrate(
    f: &dyn CoordinateFunction,
    method: IntegrationMethod,
) -> Result<IntegralEstimate> {
    match method {
        IntegrationMethod::GaussHermite { order } => gauss_hermite_tensor(f, order),
        IntegrationMethod::MonteCarlo { samples, seed } => monte_carlo(f, samples, seed),
    }
}

fn gauss_hermite_tensor(f: &dyn CoordinateFunction, order: usize) -> Result<IntegralEstimate> {
    let d = f.dim();
    let support = f.support();
    if support.iter().any(|&k| k >= d) {
        return Err(invalid(format!(
            "support {support:?} exceeds dimension {d}"
        )));
    }
    let active = support.len();
    if active > MAX_TENSOR_DIMS {
        return Err(invalid(format!(
            "tensor Gauss–Hermite over {active} active coordinates exceeds the limit of {MAX_TENSOR_DIMS}; use Monte Carlo"
        )));
    }
    let total = (order as u64)
        .checked_pow(active as u32)
        .unwrap_or(u64::MAX);
    if total > MAX_TENSOR_NODES {
        return Err(invalid(format!(
            "tensor Gauss–Hermite needs {order}^{active} nodes, limit is {MAX_TENSOR_NODES}"
        )));
    }
    let rule = GaussHermite::new(order)?;
    let inactive_mass = rule.weights().iter().sum::<f64>().powi((d - active) as i32);

    let total = total as usize;
    let chunks: Vec<Result<f64>> = (0..total.div_ceil(TENSOR_CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut a = vec![0.0; d];
            let mut acc = 0.0;
            for flat in c * TENSOR_CHUNK..((c + 1) * TENSOR_CHUNK).min(total) {
                let mut rest = flat;
                let mut weight = 1.0;
                for &k in &support {
                    let i = rest % order;
                    rest /= order;
                    a[k] = rule.nodes[i];
                    weight *= rule.weights[i];
                }
                let y = f.eval(&a);
                if !y.is_finite() {
                    return Err(Error::NumericFailure(format!(
                        "non-finite integrand at {a:?}"
                    )));
                }
                acc += weight * y;
            }
            Ok(acc)
        })
        .collect();
    let mut sum = 0.0;
    for c in chunks {
        sum += c?;
    }
    Ok(IntegralEstimate {
        estimate: inactive_mass * sum,
        stderr: 0.0,
    })
}

fn monte_carlo(f: &dyn CoordinateFunction, samples: usize, seed: u64) -> Result<IntegralEstimate> {
    if samples < 2 {
        return Err(invalid("Monte Carlo needs at least two samples"));
    }
    let d = f.dim();
    let shards = samples.div_ceil(MC_SHARD);
    let partial: Vec<Result<(f64, f64)>> = (0..shards)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(j as u64);
            let count = MC_SHARD.min(samples - j * MC_SHARD);
            let mut a = vec![0.0; d];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                for v in a.iter_mut() {
                    *v = rng.sample(StandardNormal);
                }
                let y = f.eval(&a);
                if !y.is_finite() {
                    return Err(Error::NumericFailure(format!(
                        "non-finite integrand at {a:?}"
                    )));
                }
                s += y;
                s2 += y * y;
            }
            Ok((s, s2))
        })
        .collect();
    let (mut s, mut s2) = (0.0, 0.0);
    for p in partial {
        let (a, b) = p?;
        s += a;
        s2 += b;
    }
    let n = samples as f64;
    let mean = s / n;
    let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(IntegralEstimate {
        estimate: mean,
        stderr: (var / n).sqrt(),
    })
}

/// `|I(order) − I(2·order)|`, the order-doubling change of a tensor rule.
pub fn order_doubling_delta(f: &dyn CoordinateFunction, order: usize) -> Result<f64> {
    let coarse = gauss_hermite_tensor(f, order)?.estimate;
    let fine = gauss_hermite_tensor(f, 2 * order)?.estimate;
    Ok((coarse - fine).abs())
}

/// The `cauchy-sin` functional on `D_m`, reduced to its single relevant
/// direction: `f(a) = π / (π + (g·a)²)` with `g_k = (φ_k, sin)`.
#[derive(Debug, Clone)]
pub struct CauchySinReduced {
    g: Vec<f64>,
    support: Vec<usize>,
}

impl CauchySinReduced {
    pub fn new(basis: BasisSpec) -> Result<Self> {
        let quad = make_grid(basis.default_quadrature_points())?;
        let projector = Projector::new(basis, &quad)?;
        let sin: Vec<f64> = quad.nodes().iter().map(|x| x.sin()).collect();
        let g: Vec<f64> = (0..basis.len())
            .map(|k| quad.weight() * dot(projector.basis_values(k), &sin))
            .collect();
        let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let support = (0..g.len())
            .filter(|&k| g[k].abs() > 1e-12 * scale)
            .collect();
        Ok(Self { g, support })
    }

    /// `g_k = (φ_k, sin)`.
    pub fn direction(&self) -> &[f64] {
        &self.g
    }
}

impl CoordinateFunction for CauchySinReduced {
    fn dim(&self) -> usize {
        self.g.len()
    }

    fn eval(&self, a: &[f64]) -> f64 {
        let s: f64 = self.support.iter().map(|&k| self.g[k] * a[k]).sum();
        std::f64::consts::PI / (std::f64::consts::PI + s * s)
    }

    fn support(&self) -> Vec<usize> {
        self.support.clone()
    }
}

/// A registered functional integrated over `D_m` for one basis.
#[derive(Debug, Clone)]
pub struct CylinderIntegralSpec {
    pub model: String,
    pub basis: BasisSpec,
    pub method: IntegrationMethod,
}

/// `∫ F([Σ a_k φ_k]) dμ(a)`. The `cauchy-sin` model goes through
/// [`CauchySinReduced`]; other models are synthesized on the default grid.
pub fn integrate_cylinder(spec: &CylinderIntegralSpec) -> Result<IntegralEstimate> {
    let model = model_by_name(&spec.model)?;
    if model.name() == "cauchy-sin" {
        return integrate(&CauchySinReduced::new(spec.basis)?, spec.method);
    }
    let quad = make_grid(spec.basis.default_quadrature_points())?;
    let f =
        CylindricalFunction::from_projector(model, Arc::new(Projector::new(spec.basis, &quad)?));
    integrate(&f, spec.method)
}

/// Estimates at several bases and their largest pairwise difference.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionCheck {
    pub bases: Vec<BasisSpec>,
    pub estimates: Vec<IntegralEstimate>,
    pub deviation: f64,
}

impl DimensionCheck {
    /// Largest `|I_i − I_j| / √(s_i² + s_j²)`; infinite when a pair differs
    /// with zero combined error.
    pub fn max_standardized_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.estimates.iter().enumerate() {
            for b in &self.estimates[i + 1..] {
                let diff = (a.estimate - b.estimate).abs();
                let se = a.stderr.hypot(b.stderr);
                let z = if diff == 0.0 { 0.0 } else { diff / se };
                worst = worst.max(z);
            }
        }
        worst
    }
}

/// Integrates `model` at each basis and reports the spread of the estimates.
pub fn dimension_independence_check(
    model: &str,
    bases: &[BasisSpec],
    method: IntegrationMethod,
) -> Result<DimensionCheck> {
    if bases.is_empty() {
        return Err(invalid("dimension check needs at least one basis"));
    }
    let estimates = bases
        .iter()
        .map(|&basis| {
            integrate_cylinder(&CylinderIntegralSpec {
                model: model.to_string(),
                basis,
                method,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut deviation = 0.0f64;
    for (i, a) in estimates.iter().enumerate() {
        for b in &estimates[i + 1..] {
            deviation = deviation.max((a.estimate - b.estimate).abs());
        }
    }
    Ok(DimensionCheck {
        bases: bases.to_vec(),
        estimates,
        deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::FnCoordinate;
    use nalgebra::{DMatrix, SymmetricEigen};

    /// `√(eπ/2)·erfc(1/√2)`, evaluated to 30 digits with mpmath.
    const CAUCHY_SIN_REFERENCE: f64 = 0.655_679_542_418_798_5;

    #[test]
    fn nodes_match_golub_welsch() {
        for n in [1usize, 2, 5, 16, 40] {
            let rule = GaussHermite::new(n).unwrap();
            // Jacobi matrix of the probabilists' Hermite polynomials
            let j = DMatrix::from_fn(n, n, |r, c| {
                if r + 1 == c || c + 1 == r {
                    (r.max(c) as f64).sqrt()
                } else {
                    0.0
                }
            });
            let eig = SymmetricEigen::new(j);
            let mut pairs: Vec<(f64, f64)> = eig
                .eigenvalues
                .iter()
                .enumerate()
                .map(|(i, &x)| (x, eig.eigenvectors[(0, i)].powi(2)))
                .collect();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            for (i, (x, w)) in pairs.into_iter().enumerate() {
                assert!(
                    (rule.nodes()[i] - x).abs() < 1e-10 * (1.0 + x.abs()),
                    "n={n} node {i}"
                );
                assert!(
                    (rule.weights()[i] - w).abs() < 1e-10 * w.max(1e-300) + 1e-15,
                    "n={n} weight {i}"
                );
            }
        }
    }

    #[test]
    fn gaussian_moments() {
        let rule = GaussHermite::new(64).unwrap();
        assert!((rule.expectation(|_| 1.0) - 1.0).abs() < 1e-13);
        assert!(rule.expectation(|x| x).abs() < 1e-13);
        assert!((rule.expectation(|x| x * x) - 1.0).abs() < 1e-12);
        assert!((rule.expectation(|x| x.powi(4)) - 3.0).abs() < 1e-11);
        assert!(GaussHermite::new(0).is_err());
    }

    #[test]
    fn normalization_and_moments_in_several_dimensions() {
        let one = FnCoordinate::new(9, |_| 1.0).with_support(vec![]);
        let gh = integrate(&one, IntegrationMethod::GaussHermite { order: 20 }).unwrap();
        assert!((gh.estimate - 1.0).abs() < 1e-12 && gh.stderr == 0.0);
        let mc = integrate(
            &one,
            IntegrationMethod::MonteCarlo {
                samples: 1000,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!(mc.estimate, 1.0);

        let sq = FnCoordinate::new(4, |a| a[2] * a[2]).with_support(vec![2]);
        let lin = FnCoordinate::new(4, |a| a[1]).with_support(vec![1]);
        let rule = IntegrationMethod::GaussHermite { order: 8 };
        assert!((integrate(&sq, rule).unwrap().estimate - 1.0).abs() < 1e-12);
        assert!(integrate(&lin, rule).unwrap().estimate.abs() < 1e-14);
    }

    #[test]
    fn cost_guard_counts_active_coordinates() {
        let wide = FnCoordinate::new(7, |a| a.iter().sum());
        assert!(matches!(
            integrate(&wide, IntegrationMethod::GaussHermite { order: 4 }),
            Err(Error::InvalidArgument(_))
        ));
        let narrow = FnCoordinate::new(7, |a| a[3] * a[5]).with_support(vec![3, 5]);
        assert!(integrate(&narrow, IntegrationMethod::GaussHermite { order: 4 }).is_ok());
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let f = FnCoordinate::new(1, |a| 1.0 / a[0].abs().min(0.0));
        assert!(matches!(
            integrate(&f, IntegrationMethod::GaussHermite { order: 3 }),
            Err(Error::NumericFailure(_))
        ));
        assert!(matches!(
            integrate(
                &f,
                IntegrationMethod::MonteCarlo {
                    samples: 10,
                    seed: 0
                }
            ),
            Err(Error::NumericFailure(_))
        ));
    }

    #[test]
    fn monte_carlo_is_deterministic_and_roughly_right() {
        let f = FnCoordinate::new(3, |a| a[0] * a[0] + a[1]);
        let m = IntegrationMethod::MonteCarlo {
            samples: 50_000,
            seed: 9,
        };
        let a = integrate(&f, m).unwrap();
        let b = integrate(&f, m).unwrap();
        assert_eq!(a, b);
        assert!((a.estimate - 1.0).abs() < 4.0 * a.stderr);
    }

    #[test]
    fn cauchy_sin_reference_value() {
        for m in [2, 6, 10] {
            let spec = CylinderIntegralSpec {
                model: "cauchy-sin".into(),
                basis: BasisSpec::real_fourier(m).unwrap(),
                method: IntegrationMethod::GaussHermite { order: 64 },
            };
            let est = integrate_cylinder(&spec).unwrap();
            assert!(
                (est.estimate - CAUCHY_SIN_REFERENCE).abs() < 1e-6,
                "{}",
                est.estimate
            );
        }
    }

    #[test]
    fn reduced_integrand_matches_generic_path() {
        let basis = BasisSpec::real_fourier(6).unwrap();
        let reduced = CauchySinReduced::new(basis).unwrap();
        assert_eq!(reduced.support(), vec![1]);
        let quad = make_grid(basis.default_quadrature_points()).unwrap();
        let generic =
            CylindricalFunction::new(model_by_name("cauchy-sin").unwrap(), basis, &quad).unwrap();
        for i in 0..10 {
            let a: Vec<f64> = (0..7)
                .map(|k| ((i * 7 + k) as f64 * 0.37).sin() * 2.0)
                .collect();
            assert!((reduced.eval(&a) - generic.eval(&a)).abs() < 1e-12);
        }
    }
}
