use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use statrs::function::gamma::gamma;

use super::fft;
use super::model::Multiplier;
use super::profile::{RealProfile, SpectralProfile};
use crate::error::check_range;
use crate::{Error, Result};

/// Tolerance on `|F(ξ) − conj F(−ξ)|`, relative to `max(1, max|F|)`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;

/// `∫ e^{−iξx} f(x) dx` at every grid frequency (trapezoid sum of the samples).
///
/// An exact spectrum attached to `f` travels along.
pub fn forward_transform(f: &RealProfile) -> SpectralProfile {
    let grid = *f.grid();
    SpectralProfile::with_model(grid, fft::forward(f.samples(), grid.dx()), f.model().cloned())
}

/// Inverse of [`forward_transform`].
///
/// Spectra with an exact model are synthesized with the image correction;
/// bare samples are inverted as a periodic band-limited function.
pub fn inverse_transform(spectrum: &SpectralProfile) -> Result<RealProfile> {
    let scale = spectrum.samples().iter().fold(1.0f64, |m, v| m.max(v.norm()));
    let defect = spectrum.conjugate_symmetry_defect() / scale;
    if defect > SYMMETRY_TOLERANCE {
        return Err(Error::Asymmetric {
            defect,
            tolerance: SYMMETRY_TOLERANCE,
        });
    }
    let grid = *spectrum.grid();
    match spectrum.model() {
        Some(model) => RealProfile::from_model(model.clone(), grid),
        None => {
            let values = fft::inverse(spectrum.samples(), grid.dx());
            RealProfile::new(grid, values.iter().map(|v| v.re).collect())
        }
    }
}

/// `S(α) = [√π Γ((1−α)/2) Γ(α/2)]^{−1}`, the normalization of the Riesz kernel.
pub fn riesz_constant(alpha: f64) -> Result<f64> {
    check_range("alpha", alpha > 0.0 && alpha < 1.0, || {
        format!("must lie in (0, 1), got {alpha}")
    })?;
    Ok(1.0 / (PI.sqrt() * gamma(0.5 * (1.0 - alpha)) * gamma(0.5 * alpha)))
}

/// Applies a Fourier multiplier.
pub fn apply_multiplier(f: &RealProfile, multiplier: Multiplier) -> Result<RealProfile> {
    let grid = *f.grid();
    if let Some(model) = f.model() {
        return RealProfile::from_model(model.multiply(multiplier), grid);
    }
    let mut spectrum = fft::forward(f.samples(), grid.dx());
    for (k, v) in spectrum.iter_mut().enumerate() {
        *v *= multiplier.value(grid.xi(k));
    }
    let values = fft::inverse(&spectrum, grid.dx());
    RealProfile::new(grid, values.iter().map(|v| v.re).collect())
}

/// `R_α f`, the multiplier `|ξ|^α`, for `0 < α < 1`.
///
/// Slowly decaying input is not an error; its edge mass shows up in the
/// result's [`RealProfile::truncation_estimate`].
pub fn riesz_potential(f: &RealProfile, alpha: f64) -> Result<RealProfile> {
    check_range("alpha", alpha > 0.0 && alpha < 1.0, || {
        format!("must lie in (0, 1), got {alpha}")
    })?;
    apply_multiplier(f, Multiplier::Riesz(alpha))
}

/// `D_α f`, the multiplier `i·sign(ξ)|ξ|^α`, for `0 < α ≤ 1` (`α = 1` is `d/dx`).
pub fn fractional_derivative(f: &RealProfile, alpha: f64) -> Result<RealProfile> {
    check_range("alpha", alpha > 0.0 && alpha <= 1.0, || {
        format!("must lie in (0, 1], got {alpha}")
    })?;
    apply_multiplier(f, Multiplier::FractionalDerivative(alpha))
}

/// `f * g`, the spectrum `f̂·ĝ`.
pub fn convolve(f: &RealProfile, g: &RealProfile) -> Result<RealProfile> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *f.grid();
    if let (Some(a), Some(b)) = (f.model(), g.model()) {
        return RealProfile::from_model(a.product(b), grid);
    }
    let fa = fft::forward(f.samples(), grid.dx());
    let fb = fft::forward(g.samples(), grid.dx());
    let product: Vec<Complex64> = fa.iter().zip(&fb).map(|(a, b)| a * b).collect();
    let values = fft::inverse(&product, grid.dx());
    RealProfile::new(grid, values.iter().map(|v| v.re).collect())
}
