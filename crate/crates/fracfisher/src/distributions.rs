//! Symmetric stable and Linnik densities, the Laplace and Gaussian base laws,
//! the mixing weight `g(s, a, b)` and algebraic tail envelopes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::check_range;
use crate::spectral::{fractional_derivative, DensityProfile, GridSpec, RealProfile, SpectralModel, SpectralProfile};
use crate::{Error, Result};

/// Stability index λ of a symmetric stable law, `1 < λ ≤ 2`.
///
/// λ = 2 is the Gaussian limit and is admitted for consistency checks.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StableOrder(f64);

impl StableOrder {
    pub fn new(lambda: f64) -> Result<Self> {
        check_range("lambda", lambda > 1.0 && lambda <= 2.0, || {
            format!("must satisfy 1 < lambda ≤ 2, got {lambda}")
        })?;
        Ok(Self(lambda))
    }

    pub fn lambda(self) -> f64 {
        self.0
    }

    pub fn is_gaussian(self) -> bool {
        self.0 == 2.0
    }

    /// `(2 − λ)/λ`, the exponent in the rate of convergence along normalized sums.
    pub fn rate_exponent(self) -> f64 {
        (2.0 - self.0) / self.0
    }
}

/// Parameters of the mixing weight `g(s, a, b)`, `0 < a < b ≤ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureParams {
    pub a: f64,
    pub b: f64,
}

impl MixtureParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_range("a", a > 0.0 && a < b, || {
            format!("must satisfy 0 < a < b, got a={a}, b={b}")
        })?;
        check_range("b", b <= 2.0, || format!("must satisfy b ≤ 2, got {b}"))?;
        Ok(Self { a, b })
    }
}

/// `c = Γ(λ) sin(πλ/2) / π`, the tail constant `P(|X| > x) ~ 2c·x^{−λ}` shared by
/// the laws in the domain of normal attraction of `z_λ`. The density tail is
/// `p(x) ~ cλ·|x|^{−1−λ}`.
pub fn attraction_constant(order: StableOrder) -> f64 {
    let l = order.lambda();
    gamma(l) * (0.5 * PI * l).sin() / PI
}

/// Samples of `e^{−t|ξ|^λ}`.
pub fn stable_spectrum(order: StableOrder, t: f64, grid: &GridSpec) -> Result<SpectralProfile> {
    check_range("t", t >= 0.0 && t.is_finite(), || {
        format!("must be nonnegative, got {t}")
    })?;
    Ok(SpectralProfile::from_model(
        SpectralModel::stable(order.lambda(), t),
        *grid,
    ))
}

/// The stable density `z_λ` with spectrum `e^{−|ξ|^λ}`.
pub fn stable_density(order: StableOrder, grid: &GridSpec) -> Result<DensityProfile> {
    DensityProfile::new(RealProfile::from_model(
        SpectralModel::stable(order.lambda(), 1.0),
        *grid,
    )?)
}

/// `‖D_{λ−1}z + (x/λ)z‖_∞ / ‖z‖_∞` for a profile `z`: zero exactly for the
/// stable density, whose fractional score is `−x/λ`.
pub fn stable_eigen_residual(z: &DensityProfile, order: StableOrder) -> Result<f64> {
    let lambda = order.lambda();
    let d = fractional_derivative(z.profile(), lambda - 1.0)?;
    let grid = z.grid();
    let residual = d
        .samples()
        .iter()
        .zip(z.samples())
        .enumerate()
        .fold(0.0f64, |m, (j, (dv, zv))| m.max((dv + grid.x(j) / lambda * zv).abs()));
    Ok(residual / z.profile().max_abs())
}

/// Samples of `1 / (1 + |ξ|^λ)`.
pub fn linnik_spectrum(order: StableOrder, grid: &GridSpec) -> SpectralProfile {
    SpectralProfile::from_model(SpectralModel::linnik(order.lambda()), *grid)
}

/// `g(s, a, b) = (b/π) sin(πa/b) s^{a−1} / (1 + s^{2a} + 2 s^a cos(πa/b))`.
pub fn mixture_weight(s: f64, params: MixtureParams) -> f64 {
    let MixtureParams { a, b } = params;
    let theta = PI * a / b;
    let sa = s.powf(a);
    if sa.is_infinite() {
        return 0.0;
    }
    (b / PI) * theta.sin() * s.powf(a - 1.0) / (1.0 + sa * sa + 2.0 * sa * theta.cos())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinnikMethod {
    /// Inversion of the characteristic function.
    Inversion,
    /// Scale mixture of Laplace densities, `p(x) = ∫ (s/2) e^{−s|x|} g(s, λ, 2) ds`.
    Mixture,
}

/// The Linnik density with spectrum `1 / (1 + |ξ|^λ)`.
///
/// The mixture samples carry no exact spectrum, so downstream operators treat
/// them as plain samples.
pub fn linnik_density(order: StableOrder, grid: &GridSpec, method: LinnikMethod) -> Result<DensityProfile> {
    match method {
        LinnikMethod::Inversion => {
            DensityProfile::new(RealProfile::from_model(SpectralModel::linnik(order.lambda()), *grid)?)
        }
        LinnikMethod::Mixture => {
            check_range("lambda", order.lambda() < 2.0, || {
                "the mixture form needs lambda < 2".to_string()
            })?;
            let samples = linnik_mixture_samples(order.lambda(), grid)?;
            DensityProfile::new(RealProfile::new(*grid, samples)?)
        }
    }
}

/// Convergence threshold of the mixture quadrature under node doubling.
pub const MIXTURE_TOLERANCE: f64 = 1e-6;

fn linnik_mixture_samples(lambda: f64, grid: &GridSpec) -> Result<Vec<f64>> {
    let params = MixtureParams::new(lambda, 2.0)?;
    let n = grid.n_points();
    let centre = grid.center();
    // x ≥ 0 half of the grid; the density is even
    let xs: Vec<f64> = (centre..n).map(|j| grid.x(j)).collect();
    let lo = -12.0;
    let hi = 12f64.max((40.0 / grid.dx()).ln());
    // weight in u = ln s: (s/2)·g(s)·s
    let weight = |u: f64| {
        let s = u.exp();
        0.5 * s * s * mixture_weight(s, params)
    };
    let accumulate = |acc: &mut [f64], u: f64, w: f64| {
        let s = u.exp();
        for (a, &x) in acc.iter_mut().zip(&xs) {
            *a += w * (-s * x).exp();
        }
    };

    let mut h = 0.25;
    let mut panels = ((hi - lo) / h).ceil() as usize;
    h = (hi - lo) / panels as f64;
    let mut sums = vec![0.0; xs.len()];
    for i in 0..=panels {
        let end = if i == 0 || i == panels { 0.5 } else { 1.0 };
        let u = lo + i as f64 * h;
        accumulate(&mut sums, u, end * weight(u));
    }
    let mut current: Vec<f64> = sums.iter().map(|s| s * h).collect();
    let mut change = f64::INFINITY;
    for _ in 0..8 {
        for i in 0..panels {
            let u = lo + (i as f64 + 0.5) * h;
            accumulate(&mut sums, u, weight(u));
        }
        panels *= 2;
        h *= 0.5;
        let next: Vec<f64> = sums.iter().map(|s| s * h).collect();
        change = next.iter().zip(&current).fold(0.0, |m, (a, b)| m.max((a - b).abs()));
        current = next;
        if change < MIXTURE_TOLERANCE {
            break;
        }
    }
    if change >= MIXTURE_TOLERANCE {
        return Err(Error::Convergence(format!(
            "Linnik mixture: node-doubling change {change:.2e} ≥ {MIXTURE_TOLERANCE:.0e}"
        )));
    }
    // at x = 0 the e^{−s|x|} cut-off is absent; close the s-integral beyond
    // e^{hi} with the asymptotic series of (s/2)g(s) = (sinθ/π) s^{−λ}(1 − 2cosθ s^{−λ} + …)
    let theta = 0.5 * PI * lambda;
    let big = hi.exp();
    let (c, l) = (theta.cos(), lambda);
    current[0] += theta.sin() / PI
        * (big.powf(1.0 - l) / (l - 1.0) - 2.0 * c * big.powf(1.0 - 2.0 * l) / (2.0 * l - 1.0)
            + (4.0 * c * c - 1.0) * big.powf(1.0 - 3.0 * l) / (3.0 * l - 1.0));

    let mut out = vec![0.0; n];
    for (i, v) in current.iter().enumerate() {
        out[centre + i] = *v;
        if i > 0 {
            out[centre - i] = *v;
        }
    }
    // j = 0 (x = −x_max) has no mirror inside the grid
    out[0] = linnik_mixture_point(&weight, lo, hi, grid.x_max());
    Ok(out)
}

fn linnik_mixture_point<W: Fn(f64) -> f64>(weight: &W, lo: f64, hi: f64, x: f64) -> f64 {
    let panels = 4096;
    let h = (hi - lo) / panels as f64;
    (0..=panels)
        .map(|i| {
            let u = lo + i as f64 * h;
            let end = if i == 0 || i == panels { 0.5 } else { 1.0 };
            end * weight(u) * (-u.exp() * x.abs()).exp()
        })
        .sum::<f64>()
        * h
}

/// Closed-form Gaussian density with the given variance.
pub fn gaussian_density(variance: f64, grid: &GridSpec) -> Result<DensityProfile> {
    check_range("variance", variance > 0.0, || {
        format!("must be positive, got {variance}")
    })?;
    let norm = 1.0 / (2.0 * PI * variance).sqrt();
    let samples = grid
        .xs()
        .iter()
        .map(|x| norm * (-0.5 * x * x / variance).exp())
        .collect();
    DensityProfile::new(RealProfile::with_model(
        *grid,
        samples,
        SpectralModel::gaussian(variance),
    ))
}

/// Closed-form Laplace density `e^{−|x|}/2` (spectrum `1/(1+ξ²)`).
pub fn laplace_density(grid: &GridSpec) -> Result<DensityProfile> {
    let samples = grid.xs().iter().map(|x| 0.5 * (-x.abs()).exp()).collect();
    DensityProfile::new(RealProfile::with_model(*grid, samples, SpectralModel::linnik(2.0)))
}

/// Constants of an envelope `1/p(x) ≤ A + B|x|^{1+λ}` valid at every grid point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailEnvelope {
    pub a: f64,
    pub b: f64,
    /// Tail constant `c` fitted from `p(x) ≈ cλ|x|^{−1−λ}` on the outer probes.
    pub fitted_c: f64,
}

/// Number of log-spaced probes between `dx` and `x_max`.
const ENVELOPE_PROBES: usize = 64;

/// Fits `1/p(x) ≤ A + B|x|^{1+λ}` on the grid.
///
/// Among all valid pairs the one with the smallest envelope at `|x| = 1`
/// (the unit scale of the normalized laws) is returned: `A(B) + B` is convex
/// in `B`, with `A(B) = max_j (1/p_j − B|x_j|^{1+λ})`, and is minimized by
/// golden-section search.
pub fn tail_envelope_fit(p: &DensityProfile, order: StableOrder) -> Result<TailEnvelope> {
    let grid = p.grid();
    let samples = p.samples();
    if let Some(j) = samples.iter().position(|&v| !(v.is_finite() && v > 0.0)) {
        return Err(Error::Envelope(format!(
            "density is not positive at x = {} (value {}); not in the algebraic-tail class at this resolution",
            grid.x(j),
            samples[j]
        )));
    }
    let power = 1.0 + order.lambda();
    let pts: Vec<(f64, f64)> = (0..samples.len())
        .map(|j| (grid.x(j).abs().powf(power), 1.0 / samples[j]))
        .collect();
    let a_of = |b: f64| pts.iter().fold(f64::NEG_INFINITY, |m, &(y, r)| m.max(r - b * y));
    let r0 = 1.0 / p.peak();
    let mut hi = pts
        .iter()
        .filter(|(y, _)| *y > 0.0)
        .fold(0.0f64, |m, &(y, r)| m.max((r - r0) / y));
    let mut lo = 0.0;
    let phi = |b: f64| a_of(b) + b;
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let m1 = hi - golden * (hi - lo);
        let m2 = lo + golden * (hi - lo);
        if phi(m1) <= phi(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    let b = hi;
    // make the envelope valid to rounding at every point
    let a = a_of(b).max(r0) * (1.0 + 1e-12);

    let mut fits: Vec<f64> = (0..ENVELOPE_PROBES)
        .map(|k| {
            let x = grid.dx() * (grid.x_max() / grid.dx()).powf(k as f64 / (ENVELOPE_PROBES - 1) as f64);
            let j = (grid.center() + (x / grid.dx()).round() as usize).min(samples.len() - 1);
            (grid.x(j), samples[j])
        })
        .filter(|(x, _)| *x >= grid.x_max() / 8.0)
        .map(|(x, v)| v * x.powf(power) / order.lambda())
        .collect();
    fits.sort_by(f64::total_cmp);
    let fitted_c = if fits.is_empty() {
        f64::NAN
    } else {
        fits[fits.len() / 2]
    };
    Ok(TailEnvelope { a, b, fitted_c })
}
