use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::{Error, Result};

/// Uniform symmetric grid `x_j = (j − N/2)·dx`, `j = 0..N`, on `[−x_max, x_max)`,
/// and its conjugate frequency grid `ξ_k = (k − N/2)·2π/(2·x_max)`.
///
/// Both grids are stored in centred order, so index `N/2` is the origin and
/// the mirror image of index `j ≥ 1` is `N − j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n_points: usize,
    x_max: f64,
}

impl GridSpec {
    pub fn new(n_points: usize, x_max: f64) -> Result<Self> {
        if n_points < 64 || !n_points.is_power_of_two() {
            return Err(Error::Grid(format!(
                "n_points must be a power of two ≥ 64, got {n_points}"
            )));
        }
        if !(x_max > 0.0 && x_max.is_finite()) {
            return Err(Error::Grid(format!("x_max must be positive, got {x_max}")));
        }
        Ok(Self { n_points, x_max })
    }

    /// `N = 2^16`, `x_max = 200`.
    pub fn reference() -> Self {
        Self {
            n_points: 1 << 16,
            x_max: 200.0,
        }
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.x_max / self.n_points as f64
    }

    /// Frequency spacing `2π / (2·x_max)`.
    pub fn dxi(&self) -> f64 {
        PI / self.x_max
    }

    /// Frequency half-extent `π / dx`.
    pub fn xi_max(&self) -> f64 {
        PI / self.dx()
    }

    pub fn x(&self, j: usize) -> f64 {
        (j as f64 - (self.n_points / 2) as f64) * self.dx()
    }

    pub fn xi(&self, k: usize) -> f64 {
        (k as f64 - (self.n_points / 2) as f64) * self.dxi()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    pub fn xis(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.xi(k)).collect()
    }

    /// Index of the origin.
    pub fn center(&self) -> usize {
        self.n_points / 2
    }
}

/// Spec-facing alias of [`GridSpec::new`].
pub fn make_grid(n_points: usize, x_max: f64) -> Result<GridSpec> {
    GridSpec::new(n_points, x_max)
}
