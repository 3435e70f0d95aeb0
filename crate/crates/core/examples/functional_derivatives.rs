//! Evaluate the test functional, its Fréchet derivative and its coefficient
//! gradient, and compare the gradient with finite differences.

use std::sync::Arc;

use cylapprox::basis::BasisSpec;
use cylapprox::functional::{gradient_wrt_coeffs, CylindricalFunction, FunctionalModel, SinSq};
use cylapprox::grid::make_grid;
use cylapprox::spectrum::{Decay, SpectrumLaw};
use cylapprox::CoordinateFunction;

fn main() -> cylapprox::Result<()> {
    let law = SpectrumLaw::new(Decay::algebraic(2.0)?, 200, 11)?;
    let grid = make_grid(1024)?;
    let theta = law.sample(0).eval_on_grid(&grid);
    let eta = law.sample(1).eval_on_grid(&grid);
    println!("F([θ])       = {:.10}", SinSq.evaluate(&theta));
    println!("F'([θ])η     = {:.10}", SinSq.frechet_apply(&theta, &eta)?);
    let field = SinSq.derivative_field(&theta);
    println!(
        "(δF/δθ, η)   = {:.10}",
        cylapprox::inner_product(&field, &eta)?
    );

    let basis = BasisSpec::trig_cardinal(8)?;
    let f = CylindricalFunction::new(Arc::new(SinSq), basis, &grid)?;
    let a = f.projector().project(&law.sample(0))?;
    let grad = gradient_wrt_coeffs(&f, &a)?;
    let h = 1e-4;
    println!("\n{:>3} {:>14} {:>14}", "k", "∂f/∂a_k", "central diff");
    for k in 0..basis.len() {
        let mut x = a.as_slice().to_vec();
        x[k] += h;
        let plus = f.eval(&x);
        x[k] -= 2.0 * h;
        let minus = f.eval(&x);
        println!(
            "{k:>3} {:>14.9} {:>14.9}",
            grad[k],
            (plus - minus) / (2.0 * h)
        );
    }
    Ok(())
}
