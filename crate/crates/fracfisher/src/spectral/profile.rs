use rustfft::num_complex::Complex64;

use super::grid::GridSpec;
use super::model::SpectralModel;
use super::synth::{synthesize, Placement, PROFILE_PADDING};
use crate::quad::algebraic_tail;
use crate::{Error, Result};

/// Mass tolerance applied by the density constructors.
///
/// Heavy-tailed laws lose mass beyond the window (about `2c·x_max^{−λ}`) and
/// the trapezoid rule overweights the cusp of the Linnik density at the
/// origin, so at the reference grid the deficit of a correctly sampled λ=1.2
/// density is of order 1e−3. The default admits that while still catching
/// grids that are far too narrow.
pub const DEFAULT_MASS_TOLERANCE: f64 = 5e-3;

/// Negative samples below `−NEGATIVE_CLIP` are clipped to zero in densities.
pub const NEGATIVE_CLIP: f64 = 1e-10;

/// A real function sampled on a grid, optionally with its exact spectrum.
///
/// When the spectrum is known, operators act on it exactly and the samples
/// are re-synthesized; otherwise they act on the samples, which are then
/// read as one period of a periodic function.
#[derive(Clone, Debug)]
pub struct RealProfile {
    grid: GridSpec,
    samples: Vec<f64>,
    model: Option<SpectralModel>,
    truncation: f64,
}

impl RealProfile {
    pub fn new(grid: GridSpec, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(Error::Grid(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                grid.n_points()
            )));
        }
        if let Some(j) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "profile sample",
                x: grid.x(j),
            });
        }
        Ok(Self::assemble(grid, samples, None))
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: GridSpec, f: F) -> Result<Self> {
        Self::new(grid, grid.xs().into_iter().map(f).collect())
    }

    /// Samples of the function whose spectrum is `model`.
    pub fn from_model(model: SpectralModel, grid: GridSpec) -> Result<Self> {
        let samples = synthesize(&model, &grid, PROFILE_PADDING, Placement::Nodes)?;
        Ok(Self::assemble(grid, samples, Some(model)))
    }

    /// Samples paired with the model they were computed from.
    pub(crate) fn with_model(grid: GridSpec, samples: Vec<f64>, model: SpectralModel) -> Self {
        Self::assemble(grid, samples, Some(model))
    }

    fn assemble(grid: GridSpec, samples: Vec<f64>, model: Option<SpectralModel>) -> Self {
        let truncation = edge_tail(&grid, &samples);
        Self {
            grid,
            samples,
            model,
            truncation,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn model(&self) -> Option<&SpectralModel> {
        self.model.as_ref()
    }

    /// The same samples without the exact spectrum.
    pub fn without_model(&self) -> Self {
        Self {
            model: None,
            ..self.clone()
        }
    }

    /// Estimated `∫|f|` outside the window, from the decay of the edge samples.
    pub fn truncation_estimate(&self) -> f64 {
        self.truncation
    }

    /// Trapezoid integral over the (periodic) window.
    pub fn integral(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.grid.dx()
    }

    /// `f̂(0)`: exact when the spectrum is known, the trapezoid sum otherwise.
    pub fn spectral_mass(&self) -> f64 {
        match &self.model {
            Some(m) => m.mass(),
            None => self.integral(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Whether the edge samples are below `1e−6·max|f|`.
    pub fn boundary_decayed(&self) -> bool {
        let n = self.samples.len();
        let edge = self.samples[0].abs().max(self.samples[n - 1].abs());
        edge < 1e-6 * self.max_abs()
    }

    /// `max_j |f_j − f_{N−j}|`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.samples.len();
        (1..n).fold(0.0, |m, j| m.max((self.samples[j] - self.samples[n - j]).abs()))
    }

    /// `max_j |f_j + f_{N−j}|` together with `|f(0)|`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.samples.len();
        let centre = self.samples[n / 2].abs();
        (1..n).fold(centre, |m, j| m.max((self.samples[j] + self.samples[n - j]).abs()))
    }

    pub fn sup_distance(&self, other: &RealProfile) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// `a·f + b·g`; the exact spectrum is kept when both operands have one.
    pub fn linear_combination(a: f64, f: &RealProfile, b: f64, g: &RealProfile) -> Result<Self> {
        if f.grid != g.grid {
            return Err(Error::GridMismatch);
        }
        let samples = f.samples.iter().zip(&g.samples).map(|(x, y)| a * x + b * y).collect();
        let model = match (&f.model, &g.model) {
            (Some(m), Some(n)) => Some(SpectralModel::combination(vec![(a, m.clone()), (b, n.clone())])),
            _ => None,
        };
        Ok(Self::assemble(f.grid, samples, model))
    }
}

/// Algebraic-tail estimate of `∫|f|` beyond both window edges.
pub(crate) fn edge_tail(grid: &GridSpec, samples: &[f64]) -> f64 {
    let n = samples.len();
    let right = algebraic_tail(grid.x(n - 1), samples[n - 1], grid.x(3 * n / 4), samples[3 * n / 4]).0;
    let left = algebraic_tail(grid.x(0), samples[0], grid.x(n / 4), samples[n / 4]).0;
    right + left
}

/// A complex spectrum sampled on the frequency grid, optionally with its
/// exact model.
#[derive(Clone, Debug)]
pub struct SpectralProfile {
    grid: GridSpec,
    samples: Vec<Complex64>,
    model: Option<SpectralModel>,
}

impl SpectralProfile {
    pub fn new(grid: GridSpec, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(Error::Grid(format!(
                "{} spectral samples for a grid of {} points",
                samples.len(),
                grid.n_points()
            )));
        }
        Ok(Self {
            grid,
            samples,
            model: None,
        })
    }

    /// Exact samples `φ(ξ_k)` of a model, which stays attached.
    pub fn from_model(model: SpectralModel, grid: GridSpec) -> Self {
        let samples = grid.xis().into_iter().map(|xi| model.value(xi)).collect();
        Self {
            grid,
            samples,
            model: Some(model),
        }
    }

    pub(crate) fn with_model(grid: GridSpec, samples: Vec<Complex64>, model: Option<SpectralModel>) -> Self {
        Self { grid, samples, model }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn model(&self) -> Option<&SpectralModel> {
        self.model.as_ref()
    }

    pub fn without_model(&self) -> Self {
        Self {
            model: None,
            ..self.clone()
        }
    }

    /// Sample at `ξ = 0`.
    pub fn at_zero(&self) -> Complex64 {
        self.samples[self.grid.center()]
    }

    /// `max_k |F(ξ_k) − conj F(−ξ_k)|` over the paired frequencies; the
    /// Nyquist sample `ξ = −π/dx` has no partner on the grid and is skipped.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let n = self.samples.len();
        (1..n).fold(0.0, |m, k| m.max((self.samples[k] - self.samples[n - k].conj()).norm()))
    }
}

/// A sampled probability density with its mass bookkeeping.
#[derive(Clone, Debug)]
pub struct DensityProfile {
    profile: RealProfile,
    mass_deficit: f64,
    clipped_mass: f64,
}

impl DensityProfile {
    /// Validates a profile as a density under [`DEFAULT_MASS_TOLERANCE`].
    pub fn new(profile: RealProfile) -> Result<Self> {
        Self::with_tolerance(profile, DEFAULT_MASS_TOLERANCE)
    }

    pub fn with_tolerance(profile: RealProfile, tolerance: f64) -> Result<Self> {
        let density = Self::unchecked(profile);
        if density.mass_deficit > tolerance {
            return Err(Error::MassDeficit {
                deficit: density.mass_deficit,
                tolerance,
            });
        }
        Ok(density)
    }

    pub fn from_samples(grid: GridSpec, samples: Vec<f64>) -> Result<Self> {
        Self::new(RealProfile::new(grid, samples)?)
    }

    /// Clips ringing and records the deficit without enforcing a tolerance.
    pub fn unchecked(mut profile: RealProfile) -> Self {
        let mut clipped = 0.0;
        for v in profile.samples.iter_mut() {
            if *v < -NEGATIVE_CLIP {
                clipped -= *v;
                *v = 0.0;
            }
        }
        let clipped_mass = clipped * profile.grid.dx();
        let mass_deficit = (1.0 - profile.integral()).abs();
        Self {
            profile,
            mass_deficit,
            clipped_mass,
        }
    }

    pub fn profile(&self) -> &RealProfile {
        &self.profile
    }

    pub fn grid(&self) -> &GridSpec {
        self.profile.grid()
    }

    pub fn samples(&self) -> &[f64] {
        self.profile.samples()
    }

    pub fn model(&self) -> Option<&SpectralModel> {
        self.profile.model()
    }

    /// `|1 − trapezoid mass|`.
    pub fn mass_deficit(&self) -> f64 {
        self.mass_deficit
    }

    /// Mass removed by clipping negative samples.
    pub fn clipped_mass(&self) -> f64 {
        self.clipped_mass
    }

    pub fn mass(&self) -> f64 {
        self.profile.integral()
    }

    /// Estimated probability outside the window.
    pub fn truncation_estimate(&self) -> f64 {
        self.profile.truncation_estimate()
    }

    pub fn without_model(&self) -> Self {
        Self {
            profile: self.profile.without_model(),
            ..self.clone()
        }
    }

    /// Value at the grid point nearest to the origin.
    pub fn peak(&self) -> f64 {
        self.samples()[self.grid().center()]
    }
}
