//! Solve the cylindrical advection FDE with the matrix exponential and compare
//! it with the characteristic solution.

use std::f64::consts::PI;
use std::sync::Arc;

use cylapprox::advection::{
    assemble_c, default_tail_modes, residual_tail, solve_cylindrical, verify_pde_residual,
    Propagator,
};
use cylapprox::basis::BasisSpec;
use cylapprox::functional::{exact_fde_solution, CylindricalFunction, SinSq};
use cylapprox::grid::make_grid;
use cylapprox::spectrum::{Decay, SpectrumLaw};

fn main() -> cylapprox::Result<()> {
    let theta = SpectrumLaw::new(Decay::algebraic(2.0)?, 1000, 5)?.sample(0);
    let grid = make_grid(2048)?;
    println!(
        "{:>5} {:>8} {:>16} {:>16} {:>10}",
        "m", "t", "cylindrical", "exact", "|error|"
    );
    for m in [8usize, 32, 128] {
        let basis = BasisSpec::trig_cardinal(m)?;
        let c = assemble_c(&basis, &grid)?;
        let f0 = CylindricalFunction::new(Arc::new(SinSq), basis, &grid)?;
        let a = f0.projector().project(&theta)?;
        for t in [0.5, PI] {
            let approx = solve_cylindrical(&f0, &c, a.as_slice(), t)?;
            let exact = exact_fde_solution(&SinSq, &theta, t, &grid);
            println!(
                "{m:>5} {t:>8.4} {approx:>16.10} {exact:>16.10} {:>10.2e}",
                (approx - exact).abs()
            );
        }
        println!(
            "      skew defect {:.1e}, orthogonality defect at t = π {:.1e}",
            c.skew_defect(),
            Propagator::new(&c, PI)?.orthogonality_defect()
        );
    }

    let small = BasisSpec::trig_cardinal(6)?;
    let quad = make_grid(small.default_quadrature_points())?;
    let c = assemble_c(&small, &quad)?;
    let f0 = CylindricalFunction::new(Arc::new(SinSq), small, &quad)?;
    let a = [0.3, -0.2, 0.5, 0.1, -0.4, 0.2, 0.0];
    println!(
        "\nPDE residual at t = 1, h = 1e-4: {:.2e}",
        verify_pde_residual(&f0, &c, &a, 1.0, 1e-4)?
    );

    let smooth = SpectrumLaw::new(Decay::exponential(2.0)?, 1000, 5)?.sample(0);
    for m in [8usize, 16, 32, 64] {
        let b = BasisSpec::trig_cardinal(m)?;
        let r = residual_tail(&smooth, &SinSq, &b, default_tail_modes(&b), &grid)?;
        println!("residual tail m = {m:>3}: {:.3e}", r.value);
    }
    Ok(())
}
