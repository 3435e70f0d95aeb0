use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use cylapprox::advection::{
    assemble_c, default_tail_modes, residual_tail, solve_cylindrical, verify_pde_residual,
    Propagator,
};
use cylapprox::basis::{BasisKind, BasisSpec};
use cylapprox::functional::{
    exact_fde_solution, CoordinateFunction, CylindricalFunction, FnCoordinate, SinSq,
};
use cylapprox::grid::make_grid;
use cylapprox::projection::Projector;
use cylapprox::spectrum::{Decay, FourierSpectrum, SpectrumLaw};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn kind_strategy() -> impl Strategy<Value = BasisKind> {
    prop_oneof![Just(BasisKind::TrigCardinal), Just(BasisKind::RealFourier)]
}

#[test]
fn skew_symmetry_and_orthogonality_up_to_m_128() {
    for m in [8usize, 32, 64, 128] {
        for kind in [BasisKind::TrigCardinal, BasisKind::RealFourier] {
            let b = BasisSpec::new(kind, m).unwrap();
            let c = assemble_c(&b, &make_grid(b.default_quadrature_points()).unwrap()).unwrap();
            assert!(c.skew_defect() <= 1e-10, "{kind} m={m}");
            for i in 0..b.len() {
                assert!(c.matrix()[(i, i)].abs() <= 1e-12);
            }
            for t in [0.0, 0.5, PI, 5.0, TAU] {
                let e = Propagator::new(&c, t).unwrap();
                assert!(
                    e.orthogonality_defect() <= 1e-9,
                    "{kind} m={m} t={t}: {}",
                    e.orthogonality_defect()
                );
            }
        }
    }
}

#[test]
fn full_period_returns_initial_value() {
    let b = BasisSpec::real_fourier(16).unwrap();
    let quad = make_grid(b.default_quadrature_points()).unwrap();
    let c = assemble_c(&b, &quad).unwrap();
    let f0 = CylindricalFunction::new(Arc::new(SinSq), b, &quad).unwrap();
    let a: Vec<f64> = (0..b.len()).map(|k| (k as f64 * 0.9).cos() * 2.0).collect();
    let v = solve_cylindrical(&f0, &c, &a, TAU).unwrap();
    assert!((v - f0.eval(&a)).abs() <= 1e-8);
}

#[test]
fn cylindrical_solution_is_exact_inside_the_subspace() {
    // for θ ∈ D_m, projection and advection commute
    for kind in [BasisKind::TrigCardinal, BasisKind::RealFourier] {
        let b = BasisSpec::new(kind, 16).unwrap();
        let quad = make_grid(b.default_quadrature_points()).unwrap();
        let c = assemble_c(&b, &quad).unwrap();
        let f0 = CylindricalFunction::new(Arc::new(SinSq), b, &quad).unwrap();
        let theta = SpectrumLaw::new(Decay::algebraic(2.0).unwrap(), 8, 3)
            .unwrap()
            .sample(0);
        let p = Projector::new(b, &quad).unwrap();
        let a = p.project(&theta).unwrap();
        for t in [0.4, 1.0, PI, 6.0] {
            let cyl = solve_cylindrical(&f0, &c, a.as_slice(), t).unwrap();
            let exact = exact_fde_solution(&SinSq, &theta, t, &quad);
            assert!(
                (cyl - exact).abs() <= 1e-8,
                "{kind} t={t}: {cyl} vs {exact}"
            );
            let moved = Propagator::new(&c, t).unwrap().apply(a.as_slice());
            let got = p
                .synthesize(&cylapprox::CoefficientVector::new(b, moved).unwrap())
                .unwrap();
            let want = theta.shift(t).eval_on_grid(&quad);
            for (g, w) in got.values().iter().zip(want.values()) {
                assert!((g - w).abs() <= 1e-8);
            }
        }
    }
}

#[test]
fn stability_bound_holds_along_the_flow() {
    let b = BasisSpec::trig_cardinal(16).unwrap();
    let quad = make_grid(b.default_quadrature_points()).unwrap();
    let c = assemble_c(&b, &quad).unwrap();
    let f0 = CylindricalFunction::new(Arc::new(SinSq), b, &quad).unwrap();
    let law = SpectrumLaw::new(Decay::algebraic(1.5).unwrap(), 100, 2).unwrap();
    let p = Projector::new(b, &quad).unwrap();
    for i in 0..10 {
        let a = p.project(&law.sample(i)).unwrap();
        for t in [0.1, 1.7, PI, 4.0] {
            assert!(solve_cylindrical(&f0, &c, a.as_slice(), t).unwrap().abs() <= TAU);
        }
    }
}

#[test]
fn pde_residual_is_second_order_small() {
    let b = BasisSpec::trig_cardinal(6).unwrap();
    let quad = make_grid(b.default_quadrature_points()).unwrap();
    let c = assemble_c(&b, &quad).unwrap();
    let f0 = CylindricalFunction::new(Arc::new(SinSq), b, &quad).unwrap();
    for trial in 0..6 {
        let a: Vec<f64> = (0..b.len())
            .map(|k| ((trial * 5 + k * 3) as f64 * 0.83).sin())
            .collect();
        let t = 0.7 * trial as f64;
        let coarse = verify_pde_residual(&f0, &c, &a, t, 1e-3).unwrap();
        let fine = verify_pde_residual(&f0, &c, &a, t, 1e-4).unwrap();
        assert!(fine <= 1e-5, "trial {trial}: {fine}");
        assert!(coarse / fine > 30.0, "trial {trial}: {coarse} / {fine}");
    }
}

#[test]
fn pde_residual_of_linear_initial_condition() {
    let b = BasisSpec::real_fourier(8).unwrap();
    let c = assemble_c(&b, &make_grid(256).unwrap()).unwrap();
    let w: Vec<f64> = (0..9).map(|k| 1.0 - 0.2 * k as f64).collect();
    let f0 = FnCoordinate::new(9, move |a: &[f64]| {
        a.iter().zip(&w).map(|(x, y)| x * y).sum()
    });
    let a: Vec<f64> = (0..9).map(|k| (k as f64).sqrt()).collect();
    assert!(verify_pde_residual(&f0, &c, &a, 0.0, 1e-4).unwrap() <= 1e-8);
}

#[test]
fn residual_tail_decreases_and_converges_in_tail_modes() {
    // the ensemble maximum decreases; single samples can pass near zero at small m
    let quad = make_grid(2048).unwrap();
    let ms = [8usize, 16, 32, 64];
    for beta in [1.5, 2.0, 3.0] {
        let law = SpectrumLaw::new(Decay::exponential(beta).unwrap(), 1000, 11).unwrap();
        let mut worst = [0.0f64; 4];
        for i in 0..50 {
            let theta = law.sample(i);
            for (w, &m) in worst.iter_mut().zip(&ms) {
                let b = BasisSpec::trig_cardinal(m).unwrap();
                let r = residual_tail(&theta, &SinSq, &b, default_tail_modes(&b), &quad).unwrap();
                assert!(r.projected_sum <= 1e-9, "β={beta} sample {i} m={m}: {r:?}");
                *w = w.max(r.value);
            }
            let b = BasisSpec::trig_cardinal(32).unwrap();
            let base = residual_tail(&theta, &SinSq, &b, default_tail_modes(&b), &quad)
                .unwrap()
                .value;
            let doubled = residual_tail(&theta, &SinSq, &b, 2 * default_tail_modes(&b), &quad)
                .unwrap()
                .value;
            assert!(
                (doubled - base).abs() < 0.1 * base,
                "β={beta} sample {i}: {base} vs {doubled}"
            );
        }
        assert!(worst.windows(2).all(|w| w[1] < w[0]), "β={beta}: {worst:?}");
    }
}

#[test]
fn residual_tail_of_a_subspace_resident_case() {
    let b = BasisSpec::real_fourier(8).unwrap();
    let theta = FourierSpectrum::from_sin_cos(-2.0, &[], &[]);
    let r = residual_tail(&theta, &SinSq, &b, 12, &make_grid(512).unwrap()).unwrap();
    assert!(r.value <= 1e-12 && r.projected_sum <= 1e-12);
    // θ inside D_m has no content beyond M, so the transport against it vanishes
    let inside = FourierSpectrum::from_sin_cos(0.5, &[1.0, 0.3], &[0.2]);
    assert_eq!(
        residual_tail(&inside, &SinSq, &b, 12, &make_grid(512).unwrap())
            .unwrap()
            .value,
        0.0
    );
    assert!(residual_tail(&theta, &SinSq, &b, 600, &make_grid(512).unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn flow_is_an_isometric_semigroup(kind in kind_strategy(), half in 1usize..=16, s in -4.0f64..4.0, t in -4.0f64..4.0, seed in 0u64..100) {
        let b = BasisSpec::new(kind, 2 * half).unwrap();
        let c = assemble_c(&b, &make_grid(b.default_quadrature_points()).unwrap()).unwrap();
        let es = Propagator::new(&c, s).unwrap();
        let et = Propagator::new(&c, t).unwrap();
        let est = Propagator::new(&c, s + t).unwrap();
        let product: DMatrix<f64> = es.matrix() * et.matrix();
        prop_assert!((product - est.matrix()).amax() <= 1e-8);
        let a: Vec<f64> = (0..b.len()).map(|k| ((seed + k as u64) as f64 * 1.3).sin()).collect();
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((norm(&es.apply(&a)) - norm(&a)).abs() <= 1e-9 * norm(&a).max(1.0));
    }
}
