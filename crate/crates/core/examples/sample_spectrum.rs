//! Draw a few random spectra from both decay laws and print their norms.

use cylapprox::grid::make_grid;
use cylapprox::spectrum::{sobolev_norm_sq, Decay, SpectrumLaw};

fn main() -> cylapprox::Result<()> {
    let grid = make_grid(2048)?;
    for decay in [Decay::algebraic(2.0)?, Decay::exponential(1.5)?] {
        let law = SpectrumLaw::new(decay, 1000, 7)?;
        println!("{} law, parameter {}", decay.name(), decay.param());
        for i in 0..3 {
            let theta = law.sample(i);
            let values = theta.eval_on_grid(&grid);
            let peak = values.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            println!(
                "  sample {i}: mean {:+.3}, ‖θ‖² {:.3}, |θ|₁² {:.3}, max|θ| {:.3}",
                theta.coeff(0).re,
                theta.l2_norm_sq(),
                sobolev_norm_sq(&theta, 1)?,
                peak
            );
        }
    }
    let law = SpectrumLaw::new(Decay::algebraic(2.0)?, 6, 7)?;
    println!(
        "\nspectrum file for a 6-mode sample:\n{}",
        cylapprox::spectrum::SpectrumFile {
            law: Some(law.clone()),
            spectrum: law.sample(0),
        }
        .to_text()
    );
    Ok(())
}
