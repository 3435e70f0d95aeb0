//! Integrate the Cauchy-type functional against the Gaussian measure on D_m
//! with Gauss–Hermite quadrature and Monte Carlo.

use cylapprox::basis::BasisSpec;
use cylapprox::integral::{dimension_independence_check, IntegrationMethod};

fn main() -> cylapprox::Result<()> {
    let bases: Vec<BasisSpec> = [2, 6, 10]
        .into_iter()
        .map(BasisSpec::real_fourier)
        .collect::<Result<_, _>>()?;
    for method in [
        IntegrationMethod::GaussHermite { order: 64 },
        IntegrationMethod::MonteCarlo {
            samples: 100_000,
            seed: 1,
        },
    ] {
        let check = dimension_independence_check("cauchy-sin", &bases, method)?;
        println!("{}:", method.name());
        for (b, e) in check.bases.iter().zip(&check.estimates) {
            println!(
                "  m = {:>2} ({:>2} coordinates): {:.12} ± {:.2e}",
                b.m(),
                b.len(),
                e.estimate,
                e.stderr
            );
        }
        println!("  largest difference across m: {:.2e}", check.deviation);
    }
    Ok(())
}
