//! Cylindrical approximation of functionals of periodic functions.
//!
//! A functional `F([θ])` on `L²_p([0, 2π])` is approximated by
//! `f(a) = F([Σ a_k φ_k])`, its restriction to a `(m+1)`-dimensional
//! trigonometric subspace `D_m`. The crate provides the bases and projections,
//! model functionals with their derivatives, the cylindrical solution of the
//! Hopf equation of linear advection, Gaussian integrals over `D_m`, and a
//! harness that measures convergence rates over random spectrum ensembles.

pub mod advection;
pub mod basis;
pub mod error;
pub mod expm;
pub mod functional;
pub mod grid;
pub mod harness;
pub mod integral;
pub mod projection;
pub mod spectrum;

pub use advection::{
    assemble_c, residual_tail, solve_cylindrical, verify_pde_residual, CoefficientMatrix,
    Propagator, ResidualTail,
};
pub use basis::{eval_basis, BasisKind, BasisSpec};
pub use error::{Error, Result};
pub use expm::matrix_exponential;
pub use functional::{
    derivative_field_sinsq, eval_sinsq, exact_fde_solution, frechet_apply_sinsq,
    gradient_wrt_coeffs, model_by_name, CauchySin, CoordinateFunction, CylindricalFunction,
    FnCoordinate, FunctionalModel, SinSq, SinSqInvariant,
};
pub use grid::{inner_product, make_grid, GridFunction, UniformGrid};
pub use harness::{
    emit_csv, fit_rate, fit_sweep, run_derivative_field_convergence, run_experiment,
    run_fde_convergence, run_frechet_convergence, run_functional_convergence, run_integral_sweep,
    run_projection_convergence, ConvergenceRecord, ExperimentConfig, ExperimentKind, FitModel,
    RateFit,
};
pub use integral::{
    dimension_independence_check, integrate, integrate_cylinder, CylinderIntegralSpec,
    GaussHermite, IntegralEstimate, IntegrationMethod,
};
pub use projection::{
    l2_projection_error, project, synthesize, tail_energy, CoefficientVector, Projector,
};
pub use spectrum::{sample_spectrum, sobolev_norm_sq, Decay, FourierSpectrum, SpectrumLaw};
