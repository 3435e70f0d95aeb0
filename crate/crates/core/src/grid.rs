//! Uniform periodic grids on `[0, 2π)` and sampled functions.
//!
//! All L² inner products in the crate go through the periodic trapezoid rule
//! on one of these grids. For smooth periodic integrands the rule converges
//! spectrally, and it is exact for trigonometric polynomials of degree below
//! the number of points.

use std::f64::consts::TAU;
use std::sync::Arc;

use crate::error::{invalid, Result};

/// Uniform grid `x_j = 2πj/n`, `j = 0..n`, with trapezoid weight `2π/n`.
#[derive(Debug, Clone)]
pub struct UniformGrid {
    n_points: usize,
    nodes: Arc<[f64]>,
    weight: f64,
}

impl PartialEq for UniformGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n_points == other.n_points
    }
}

impl Eq for UniformGrid {}

/// Builds the uniform periodic grid with `n_points` nodes.
pub fn make_grid(n_points: usize) -> Result<UniformGrid> {
    UniformGrid::new(n_points)
}

impl UniformGrid {
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(invalid(format!(
                "a periodic grid needs at least 2 points, got {n_points}"
            )));
        }
        let n = n_points as f64;
        let nodes: Arc<[f64]> = (0..n_points).map(|j| TAU * j as f64 / n).collect();
        Ok(Self {
            n_points,
            nodes,
            weight: TAU / n,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Trapezoid weight `2π / n_points`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Samples `f` at every node.
    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> GridFunction {
        GridFunction {
            grid: self.clone(),
            values: self.nodes.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Table of `cos(2πr/n)` and `sin(2πr/n)` for `r = 0..n`.
    ///
    /// `k·x_j` reduced mod 2π is `2π (k j mod n)/n`, so trigonometric sums on
    /// the grid can index this table instead of calling `sin`/`cos` with
    /// large arguments.
    pub(crate) fn twiddles(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n_points as f64;
        (0..self.n_points)
            .map(|r| {
                let phase = TAU * r as f64 / n;
                (phase.cos(), phase.sin())
            })
            .unzip()
    }
}

/// Real function sampled on a [`UniformGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(invalid(format!(
                "{} values supplied for a grid of {} points",
                values.len(),
                grid.n_points()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: &UniformGrid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![0.0; grid.n_points()],
        }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Pointwise map, keeping the grid.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `self - other` on a shared grid.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_grid(self, other)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// `a·self + b·other` on a shared grid.
    pub fn lin_comb(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        same_grid(self, other)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub fn norm_l2_sq(&self) -> f64 {
        self.grid.weight() * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn norm_l2(&self) -> f64 {
        self.norm_l2_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn same_grid(f: &GridFunction, g: &GridFunction) -> Result<()> {
    if f.grid != g.grid {
        return Err(invalid(format!(
            "grid mismatch: {} vs {} points",
            f.grid.n_points(),
            g.grid.n_points()
        )));
    }
    Ok(())
}

/// Periodic trapezoid approximation of `∫₀^{2π} f g dx`.
pub fn inner_product(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    same_grid(f, g)?;
    Ok(dot(&f.values, &g.values) * f.grid.weight())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn four_point_grid() {
        let g = make_grid(4).unwrap();
        assert_eq!(g.nodes(), &[0.0, PI / 2.0, PI, 3.0 * PI / 2.0]);
        assert_eq!(g.weight(), PI / 2.0);
    }

    #[test]
    fn two_point_grid() {
        let g = make_grid(2).unwrap();
        assert_eq!(g.nodes(), &[0.0, PI]);
        assert_eq!(g.weight(), PI);
    }

    #[test]
    fn degenerate_grids_rejected() {
        assert!(matches!(
            make_grid(1),
            Err(crate::Error::InvalidArgument(_))
        ));
        assert!(make_grid(0).is_err());
    }

    #[test]
    fn nodes_increasing_and_weight_sums_to_circle() {
        for n in [2, 3, 7, 64, 1001] {
            let g = make_grid(n).unwrap();
            assert_eq!(g.nodes()[0], 0.0);
            assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(*g.nodes().last().unwrap() < TAU);
            assert!((g.weight() * n as f64 - TAU).abs() < 1e-14);
        }
    }

    #[test]
    fn inner_products() {
        for n in [3, 16, 64] {
            let g = make_grid(n).unwrap();
            let one = g.sample(|_| 1.0);
            assert!((inner_product(&one, &one).unwrap() - TAU).abs() < 1e-13);
        }
        let g = make_grid(64).unwrap();
        let s = g.sample(f64::sin);
        let c = g.sample(f64::cos);
        assert!(inner_product(&s, &c).unwrap().abs() < 1e-12);
        let s3 = g.sample(|x| (3.0 * x).sin());
        assert!((inner_product(&s3, &s3).unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn mismatched_grids_rejected() {
        let f = make_grid(8).unwrap().sample(f64::sin);
        let g = make_grid(9).unwrap().sample(f64::sin);
        assert!(matches!(
            inner_product(&f, &g),
            Err(crate::Error::InvalidArgument(_))
        ));
        assert!(GridFunction::new(make_grid(4).unwrap(), vec![0.0; 3]).is_err());
    }
}
