//! Fractional scores and the relative fractional Fisher information
//! `I_{λ,υ}(f) = ∫ (D_{λ−1}f/f + x/(λυ))² f dx`.
//!
//! Densities carrying an exact spectrum are evaluated at the cell midpoints
//! `x_j + dx/2`: the relative score of a Linnik-type law jumps at the origin
//! and a node sits exactly on the jump, which biases the node trapezoid by
//! about half a percent. Plain samples use the node trapezoid with the
//! derivative taken in a zero-padded window.

use serde::Serialize;

use crate::distributions::StableOrder;
use crate::error::check_range;
use crate::quad::algebraic_tail;
use crate::spectral::synth::{synthesize, Placement, FISHER_PADDING, PROFILE_PADDING};
use crate::spectral::{padded_multiply, DensityProfile, GridSpec, Multiplier, RealProfile, SpectralModel};
use crate::{Error, Result};

/// Default `ε_supp / max f`.
pub const SUPPORT_FACTOR: f64 = 1e-12;

/// Padding of the derivative window for densities known only by samples.
const SAMPLE_PADDING: usize = 4;

/// Smallest truncation estimate reported; keeps tolerance-based checks
/// meaningful when the integrand underflows before the window edge.
const TRUNCATION_FLOOR: f64 = 1e-14;

/// `|D_α f + c·x·f| ≤ NOISE_CANCELLATION·|c·x·f|` marks an edge sample whose
/// integrand value is rounding noise.
const NOISE_CANCELLATION: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FisherReport {
    pub lambda: f64,
    pub upsilon: f64,
    pub value: f64,
    pub support_threshold: f64,
    /// Estimated integral of the integrand outside the retained support;
    /// infinite (serialized as `null`) when the integrand does not decay.
    #[serde(serialize_with = "finite_or_null")]
    pub truncation_estimate: f64,
    pub n_points: usize,
    pub x_max: f64,
}

fn finite_or_null<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FisherOptions {
    /// `ε_supp = support_factor · max f`.
    pub support_factor: f64,
}

impl Default for FisherOptions {
    fn default() -> Self {
        Self {
            support_factor: SUPPORT_FACTOR,
        }
    }
}

/// A score on the grid; samples outside `{f > ε_supp}` are zero and masked out.
#[derive(Clone, Debug)]
pub struct ScoreProfile {
    pub profile: RealProfile,
    pub mask: Vec<bool>,
    pub support_threshold: f64,
}

impl ScoreProfile {
    /// Largest `|score − reference(x)|` over the retained support.
    pub fn sup_distance_to<F: Fn(f64) -> f64>(&self, reference: F) -> f64 {
        let grid = self.profile.grid();
        self.profile
            .samples()
            .iter()
            .zip(&self.mask)
            .enumerate()
            .filter(|(_, (_, &keep))| keep)
            .fold(0.0, |m, (j, (v, _))| m.max((v - reference(grid.x(j))).abs()))
    }

    pub fn retained(&self) -> usize {
        self.mask.iter().filter(|&&k| k).count()
    }
}

fn support_threshold(samples: &[f64], factor: f64) -> f64 {
    factor * samples.iter().fold(0.0f64, |m, &v| m.max(v))
}

/// `D_α f + offset·x·f` and `f` on the quadrature points.
struct Integrand {
    xs: Vec<f64>,
    density: Vec<f64>,
    numerator: Vec<f64>,
    dx: f64,
}

impl Integrand {
    fn new(f: &DensityProfile, alpha: f64, offset: f64) -> Result<Self> {
        let grid = f.grid();
        let dx = grid.dx();
        match f.model() {
            Some(model) => {
                let density = synthesize(model, grid, FISHER_PADDING, Placement::Midpoints)?;
                let numerator = synthesize(
                    &model.score_numerator(alpha, offset),
                    grid,
                    FISHER_PADDING,
                    Placement::Midpoints,
                )?;
                let xs = grid.xs().iter().map(|x| x + 0.5 * dx).collect();
                Ok(Self {
                    xs,
                    density,
                    numerator,
                    dx,
                })
            }
            None => {
                let xs = grid.xs();
                let density = f.samples().to_vec();
                let derivative = sample_derivative(&density, grid, alpha)?;
                let numerator = derivative
                    .iter()
                    .zip(&density)
                    .zip(&xs)
                    .map(|((d, v), x)| d + offset * x * v)
                    .collect();
                Ok(Self {
                    xs,
                    density,
                    numerator,
                    dx,
                })
            }
        }
    }

    fn mask(&self, threshold: f64) -> Result<Vec<bool>> {
        let mask: Vec<bool> = self.density.iter().map(|&v| v > threshold).collect();
        if !mask.iter().any(|&k| k) {
            return Err(Error::EmptySupport { threshold });
        }
        Ok(mask)
    }

    /// `(∫ num²/f over the mask, truncation estimate)`.
    fn fisher(&self, threshold: f64, lambda: f64, offset: f64) -> Result<(f64, f64)> {
        let mask = self.mask(threshold)?;
        let mut q = vec![0.0; self.xs.len()];
        for j in 0..q.len() {
            if mask[j] {
                let v = self.numerator[j] * self.numerator[j] / self.density[j];
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        what: "Fisher integrand",
                        x: self.xs[j],
                    });
                }
                q[j] = v;
            }
        }
        let value = q.iter().sum::<f64>() * self.dx;
        let trunc = self.truncation(&q, &mask, lambda, offset);
        Ok((value, trunc))
    }

    /// Tail of the integrand beyond the outermost retained point on each
    /// side, from its log-log slope against a point at half the distance.
    /// The slope is capped at `1 − 3λ`, the decay of the integrand for laws
    /// with `|x|^{−1−λ}` tails, so noisy fits never claim a faster decay.
    /// When the numerator at the edge has cancelled to rounding level against
    /// its offset term, the fit is meaningless and the capped rate is used.
    fn truncation(&self, q: &[f64], mask: &[bool], lambda: f64, offset: f64) -> f64 {
        let n = q.len();
        let centre = n / 2;
        let slowest = 1.0 - 3.0 * lambda;
        let side = |edge: usize| {
            let inner = (centre as isize + (edge as isize - centre as isize) / 2) as usize;
            let (x_e, v_e) = (self.xs[edge], q[edge]);
            if v_e == 0.0 {
                return 0.0;
            }
            let capped = v_e * x_e.abs() / (-slowest - 1.0);
            let term = offset * x_e * self.density[edge];
            if self.numerator[edge].abs() <= NOISE_CANCELLATION * term.abs() {
                return capped;
            }
            let (fit, slope) = algebraic_tail(x_e, v_e, self.xs[inner], q[inner]);
            if slope.is_nan() || slope > slowest {
                fit
            } else {
                capped
            }
        };
        let right = (centre..n).rev().find(|&j| mask[j]).unwrap_or(centre);
        let left = (0..=centre).find(|&j| mask[j]).unwrap_or(centre);
        (side(right) + side(left)).max(TRUNCATION_FLOOR)
    }
}

/// `D_α` of plain samples.
///
/// The fractional derivative is nonlocal, so cutting a heavy-tailed density
/// at the window edge perturbs it everywhere. The samples are therefore
/// continued into a window `SAMPLE_PADDING` times wider by the algebraic tail
/// fitted at each edge (zero when the samples do not decay algebraically).
///
/// The multiplier is singular at `ξ = 0`, and a discrete sum over the
/// frequency grid resolves that singularity only to `O(dξ^α)`, an error
/// spread evenly over the window that swamps the score where `f` is small.
/// The mass is therefore carried by a unit Gaussian, whose derivative is
/// synthesized exactly, and only the remainder, whose spectrum vanishes at
/// the origin, is differentiated by FFT.
fn sample_derivative(samples: &[f64], grid: &GridSpec, alpha: f64) -> Result<Vec<f64>> {
    let n = samples.len();
    let big = n * SAMPLE_PADDING;
    let offset = (big - n) / 2;
    let dx = grid.dx();
    let tail = |edge: usize, inner: usize| {
        let (x_e, v_e) = (grid.x(edge).abs(), samples[edge]);
        let (x_i, v_i) = (grid.x(inner).abs(), samples[inner]);
        let slope = if v_e > 0.0 && v_i > v_e {
            (v_e / v_i).ln() / (x_e / x_i).ln()
        } else {
            f64::NAN
        };
        move |x: f64| {
            if slope < -1.0 {
                v_e * (x.abs() / x_e).powf(slope)
            } else {
                0.0
            }
        }
    };
    let right = tail(n - 1, 3 * n / 4);
    let left = tail(0, n / 4);
    let mut extended = vec![0.0; big];
    for (j, v) in extended.iter_mut().enumerate() {
        let x = (j as f64 - (big / 2) as f64) * dx;
        *v = if j < offset {
            left(x)
        } else if j >= offset + n {
            right(x)
        } else {
            samples[j - offset]
        };
    }
    let mass = extended.iter().sum::<f64>() * dx;
    let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    for (j, v) in extended.iter_mut().enumerate() {
        let x = (j as f64 - (big / 2) as f64) * dx;
        *v -= mass * norm * (-0.5 * x * x).exp();
    }
    let multiplier = Multiplier::FractionalDerivative(alpha);
    let reference = synthesize(
        &SpectralModel::gaussian(1.0).multiply(multiplier),
        grid,
        PROFILE_PADDING,
        Placement::Nodes,
    )?;
    // exponential filter: the periodic multiplier jumps at the Nyquist
    // frequency, which rings as (−1)^j/x for spectra with algebraic decay
    let nyquist = std::f64::consts::PI / dx;
    let filtered = |xi: f64| multiplier.value(xi) * (-36.0 * (xi / nyquist).abs().powi(36)).exp();
    Ok(padded_multiply(&extended, dx, 1, filtered)[offset..offset + n]
        .iter()
        .zip(&reference)
        .map(|(v, r)| v.re + mass * r)
        .collect())
}

/// Sample-only densities must carry their mass inside the window. With an
/// exact spectrum the window mass does not enter the computation and mass
/// beyond the window shows up in the truncation estimate instead.
fn check_density(f: &DensityProfile) -> Result<()> {
    let tolerance = crate::spectral::DEFAULT_MASS_TOLERANCE;
    if f.model().is_none() && f.mass_deficit() > tolerance {
        return Err(Error::MassDeficit {
            deficit: f.mass_deficit(),
            tolerance,
        });
    }
    Ok(())
}

fn score_with_offset(f: &DensityProfile, order: StableOrder, offset: f64) -> Result<ScoreProfile> {
    check_density(f)?;
    let grid = *f.grid();
    let alpha = order.lambda() - 1.0;
    let derivative: Vec<f64> = match f.model() {
        Some(model) => synthesize(
            &model.multiply(Multiplier::FractionalDerivative(alpha)),
            &grid,
            PROFILE_PADDING,
            Placement::Nodes,
        )?,
        None => sample_derivative(f.samples(), &grid, alpha)?,
    };
    let threshold = support_threshold(f.samples(), SUPPORT_FACTOR);
    let mask: Vec<bool> = f.samples().iter().map(|&v| v > threshold).collect();
    if !mask.iter().any(|&k| k) {
        return Err(Error::EmptySupport { threshold });
    }
    let samples = (0..grid.n_points())
        .map(|j| {
            if mask[j] {
                derivative[j] / f.samples()[j] + offset * grid.x(j)
            } else {
                0.0
            }
        })
        .collect();
    Ok(ScoreProfile {
        profile: RealProfile::new(grid, samples)?,
        mask,
        support_threshold: threshold,
    })
}

/// `D_{λ−1}f / f` on `{f > ε_supp}`.
pub fn fractional_score(f: &DensityProfile, order: StableOrder) -> Result<ScoreProfile> {
    score_with_offset(f, order, 0.0)
}

/// `D_{λ−1}f / f + x/(λυ)` on `{f > ε_supp}`; zero for `z_λ` at `υ = 1`.
pub fn relative_fractional_score(f: &DensityProfile, order: StableOrder, upsilon: f64) -> Result<ScoreProfile> {
    check_upsilon(upsilon)?;
    score_with_offset(f, order, 1.0 / (order.lambda() * upsilon))
}

fn check_upsilon(upsilon: f64) -> Result<()> {
    check_range("upsilon", upsilon > 0.0 && upsilon.is_finite(), || {
        format!("must be positive, got {upsilon}")
    })
}

/// `I_{λ,υ}(f)` with the default support threshold.
pub fn relative_fisher(f: &DensityProfile, order: StableOrder, upsilon: f64) -> Result<FisherReport> {
    relative_fisher_with(f, order, upsilon, FisherOptions::default())
}

pub fn relative_fisher_with(
    f: &DensityProfile,
    order: StableOrder,
    upsilon: f64,
    options: FisherOptions,
) -> Result<FisherReport> {
    check_upsilon(upsilon)?;
    check_density(f)?;
    let lambda = order.lambda();
    let integrand = Integrand::new(f, lambda - 1.0, 1.0 / (lambda * upsilon))?;
    let threshold = support_threshold(&integrand.density, options.support_factor);
    let (value, truncation_estimate) = integrand.fisher(threshold, lambda, 1.0 / (lambda * upsilon))?;
    Ok(FisherReport {
        lambda,
        upsilon,
        value,
        support_threshold: threshold,
        truncation_estimate,
        n_points: f.grid().n_points(),
        x_max: f.grid().x_max(),
    })
}

/// Classical Fisher information relative to the centred Gaussian of variance
/// `σ`: `∫ (f′/f + x/σ)² f`.
pub fn relative_fisher_gaussian(f: &DensityProfile, sigma: f64) -> Result<f64> {
    check_range("sigma", sigma > 0.0 && sigma.is_finite(), || {
        format!("must be positive, got {sigma}")
    })?;
    check_density(f)?;
    let integrand = Integrand::new(f, 1.0, 1.0 / sigma)?;
    let threshold = support_threshold(&integrand.density, SUPPORT_FACTOR);
    Ok(integrand.fisher(threshold, 2.0, 1.0 / sigma)?.0)
}

/// The exact spectrum of `D_{λ−1}f + x f/(λυ)` when `f` carries one.
pub fn relative_score_numerator_model(f: &DensityProfile, order: StableOrder, upsilon: f64) -> Option<SpectralModel> {
    let lambda = order.lambda();
    f.model()
        .map(|m| m.score_numerator(lambda - 1.0, 1.0 / (lambda * upsilon)))
}
