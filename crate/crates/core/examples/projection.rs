//! Project one rough function onto nested trigonometric spaces and watch the
//! error fall.

use cylapprox::basis::{BasisKind, BasisSpec};
use cylapprox::grid::make_grid;
use cylapprox::projection::Projector;
use cylapprox::spectrum::{Decay, SpectrumLaw};

fn main() -> cylapprox::Result<()> {
    let theta = SpectrumLaw::new(Decay::algebraic(1.5)?, 1000, 3)?.sample(0);
    let grid = make_grid(2048)?;
    println!(
        "{:>5} {:>14} {:>14} {:>12}",
        "m", "cardinal", "fourier", "tail energy"
    );
    for m in [4usize, 8, 16, 32, 64, 128] {
        let errors: Vec<f64> = [BasisKind::TrigCardinal, BasisKind::RealFourier]
            .into_iter()
            .map(|kind| Projector::new(BasisSpec::new(kind, m)?, &grid)?.l2_error(&theta))
            .collect::<cylapprox::Result<_>>()?;
        let tail = Projector::new(BasisSpec::trig_cardinal(m)?, &grid)?.tail_energy(&theta)?;
        println!(
            "{m:>5} {:>14.6e} {:>14.6e} {tail:>12.4e}",
            errors[0], errors[1]
        );
    }
    // both bases span the same space, so the errors agree
    Ok(())
}
