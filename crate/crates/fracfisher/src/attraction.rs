//! Domain-of-attraction diagnostics and the finiteness certificate for the
//! relative fractional Fisher information of the Linnik law.
//!
//! The certificate chain: `1/p_λ ≤ A + B|x|^{1+λ}` on the grid, so
//! `I_λ(p_λ) = ∫ g_λ²/p_λ ≤ ∫ g_λ²(A + B|x|^{1+λ})` with
//! `g_λ = D_{λ−1}p_λ + (x/λ)p_λ`; the weighted moment of `g_λ` is in turn
//! controlled through the Laplace-mixture kernel `h_λ` by an interpolation
//! inequality and Jensen's inequality over the mixing weight.

use serde::{Deserialize, Serialize};

use crate::clt::TOLERANCE_FACTOR;
use crate::distributions::{
    attraction_constant, linnik_density, mixture_weight, tail_envelope_fit, LinnikMethod, MixtureParams, StableOrder,
    TailEnvelope,
};
use crate::error::check_range;
use crate::information::relative_fisher;
use crate::quad::{algebraic_tail, doubling_trapezoid};
use crate::spectral::{
    fractional_derivative, inverse_transform, DensityProfile, GridSpec, RealProfile, SpectralModel, SpectralProfile,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttractionReport {
    pub lambda: f64,
    /// `(ξ, R(ξ))` at the positive grid frequencies.
    #[serde(skip)]
    pub remainder_trace: Vec<(f64, f64)>,
    /// `Γ(λ)sin(πλ/2)/π`.
    pub tail_constant_c: f64,
    /// `max |R|` over the smallest decade of positive frequencies.
    pub small_frequency_max: f64,
    pub verdict: Verdict,
}

impl AttractionReport {
    /// CSV with columns `xi, remainder`.
    pub fn trace_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["xi", "remainder"])?;
        for (xi, r) in &self.remainder_trace {
            w.write_record([format!("{xi:e}"), format!("{r:e}")])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Threshold on `max |R|` over `[dξ, 10dξ]` for a consistent verdict.
pub const REMAINDER_THRESHOLD: f64 = 0.1;

/// `R(ξ) = 1 − (1 − F(ξ))/|ξ|^λ`, which tends to zero at the origin exactly
/// when `F` is in the domain of normal attraction of the order-λ stable law
/// (with the normalization of `e^{−|ξ|^λ}`).
pub fn attraction_remainder(spectrum: &SpectralProfile, order: StableOrder) -> Result<AttractionReport> {
    let at_zero = spectrum.at_zero();
    if (at_zero - 1.0).norm() > 1e-6 {
        return Err(Error::Parameter {
            name: "spectrum",
            constraint: format!("must equal 1 at the origin within 1e-6, got {at_zero}"),
        });
    }
    let lambda = order.lambda();
    let grid = spectrum.grid();
    let centre = grid.center();
    let remainder_trace: Vec<(f64, f64)> = (centre + 1..grid.n_points())
        .map(|k| {
            let xi = grid.xi(k);
            (xi, 1.0 - (1.0 - spectrum.samples()[k].re) / xi.abs().powf(lambda))
        })
        .collect();
    let small_frequency_max = remainder_trace.iter().take(10).fold(0.0f64, |m, (_, r)| m.max(r.abs()));
    Ok(AttractionReport {
        lambda,
        remainder_trace,
        tail_constant_c: attraction_constant(order),
        small_frequency_max,
        verdict: if small_frequency_max < REMAINDER_THRESHOLD {
            Verdict::Consistent
        } else {
            Verdict::Inconsistent
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub nu: f64,
    /// `∫|x|^ν f` over the whole window.
    pub value: f64,
    /// The same over the central half of the window.
    pub half_window_value: f64,
    /// `|value − half_window_value| / |value|`.
    pub relative_change: f64,
    /// Set when doubling the extent changes the value by more than 20%.
    pub divergent: bool,
}

/// Relative change under extent doubling above which a moment is reported divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 0.2;

/// `∫|x|^ν f(x) dx` with an extent-doubling divergence test (half window
/// against full window).
pub fn fractional_moment(f: &DensityProfile, nu: f64) -> Result<MomentReport> {
    check_range("nu", nu > 0.0 && nu.is_finite(), || {
        format!("must be positive, got {nu}")
    })?;
    let grid = f.grid();
    let half = 0.5 * grid.x_max();
    let (mut full, mut inner) = (0.0, 0.0);
    for (j, v) in f.samples().iter().enumerate() {
        let x = grid.x(j);
        let term = x.abs().powf(nu) * v;
        full += term;
        if x.abs() <= half {
            inner += term;
        }
    }
    let (value, half_window_value) = (full * grid.dx(), inner * grid.dx());
    let relative_change = (value - half_window_value).abs() / value.abs();
    Ok(MomentReport {
        nu,
        value,
        half_window_value,
        relative_change,
        divergent: relative_change > DIVERGENCE_THRESHOLD,
    })
}

fn check_open_order(order: StableOrder) -> Result<f64> {
    let lambda = order.lambda();
    check_range("lambda", lambda < 2.0, || {
        format!("must satisfy 1 < lambda < 2, got {lambda}")
    })?;
    Ok(lambda)
}

/// Samples of `ĝ_λ(ξ) = iξ|ξ|^{2λ−2}/(1 + |ξ|^λ)²`, the spectrum of
/// `g_λ = D_{λ−1}p_λ + (x/λ)p_λ` for the Linnik density `p_λ`.
pub fn linnik_g_spectrum_analytic(order: StableOrder, grid: &GridSpec) -> Result<SpectralProfile> {
    let lambda = check_open_order(order)?;
    Ok(SpectralProfile::from_model(SpectralModel::linnik_score(lambda), *grid))
}

/// `g_λ` built in physical space from the fractional derivative of the
/// Linnik density.
pub fn linnik_g_physical(order: StableOrder, grid: &GridSpec) -> Result<RealProfile> {
    let lambda = check_open_order(order)?;
    let p = linnik_density(order, grid, LinnikMethod::Inversion)?;
    let d = fractional_derivative(p.profile(), lambda - 1.0)?;
    let samples = d
        .samples()
        .iter()
        .zip(p.samples())
        .enumerate()
        .map(|(j, (dv, pv))| dv + grid.x(j) * pv / lambda)
        .collect();
    RealProfile::new(*grid, samples)
}

/// Relative L² distance between the physical-space `g_λ` and the inverse
/// transform of its closed-form spectrum.
pub fn g_equivalence_check(order: StableOrder, grid: &GridSpec) -> Result<f64> {
    let physical = linnik_g_physical(order, grid)?;
    let analytic = inverse_transform(&linnik_g_spectrum_analytic(order, grid)?)?;
    let (mut num, mut den) = (0.0, 0.0);
    for (a, b) in physical.samples().iter().zip(analytic.samples()) {
        num += (a - b) * (a - b);
        den += b * b;
    }
    Ok((num / den).sqrt())
}

/// `C_λ` in `∫|x|^{1+λ}h² ≤ C_λ(∫h²)^{(3−λ)/4}(∫x⁴h²)^{(1+λ)/4}`.
///
/// Splitting at `|x| = R` gives `(2R)^{1+λ}∫h² + R^{λ−3}∫x⁴h²`, minimized at
/// `R⁴ = κ·∫x⁴h²/∫h²`, `κ = (3−λ)/((1+λ)2^{1+λ})`, which leaves
/// `C_λ = 2^{1+λ}κ^{(1+λ)/4} + κ^{−(3−λ)/4}`.
pub fn interpolation_constant(lambda: f64) -> f64 {
    let kappa = (3.0 - lambda) / ((1.0 + lambda) * 2f64.powf(1.0 + lambda));
    2f64.powf(1.0 + lambda) * kappa.powf(0.25 * (1.0 + lambda)) + kappa.powf(-0.25 * (3.0 - lambda))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HMoments {
    /// `∫h²`.
    pub l2: f64,
    /// `∫x⁴h²` by physical-space quadrature (with algebraic tail closure).
    pub x4: f64,
    /// `(1/2π)∫|ĥ″|²` from second divided differences of the spectrum.
    pub x4_spectral: f64,
    /// `C_λ·l2^{(3−λ)/4}·x4^{(1+λ)/4}`.
    pub interp: f64,
    /// `∫|x|^{1+λ}h²`.
    pub direct: f64,
}

impl HMoments {
    /// `|x4 − x4_spectral| / x4_spectral`.
    pub fn plancherel_gap(&self) -> f64 {
        (self.x4 - self.x4_spectral).abs() / self.x4_spectral
    }
}

/// Refinement of the frequency grid used for the spectral fourth moment.
const SPECTRAL_REFINEMENT: usize = 8;

/// Moments of the mixture kernel `h_λ` with `ĥ_λ(ξ) = (2i/λ)ξ|ξ|^λ/(1+ξ²)²`.
pub fn h_moment_bounds(order: StableOrder, grid: &GridSpec) -> Result<HMoments> {
    let lambda = check_open_order(order)?;
    let model = SpectralModel::mixture_kernel(lambda);
    let h = RealProfile::from_model(model.clone(), *grid)?;
    let dx = grid.dx();
    let (mut l2, mut x4, mut direct) = (0.0, 0.0, 0.0);
    for (j, v) in h.samples().iter().enumerate() {
        let x = grid.x(j).abs();
        let v2 = v * v;
        l2 += v2;
        x4 += x.powi(4) * v2;
        direct += x.powf(1.0 + lambda) * v2;
    }
    let n = grid.n_points();
    let weighted = |j: usize| grid.x(j).powi(4) * h.samples()[j].powi(2);
    let tail = algebraic_tail(grid.x(n - 1), weighted(n - 1), grid.x(3 * n / 4), weighted(3 * n / 4)).0
        + algebraic_tail(grid.x(0), weighted(0), grid.x(n / 4), weighted(n / 4)).0;
    let (l2, x4, direct) = (l2 * dx, x4 * dx + tail, direct * dx);

    // ĥ is odd, so |ĥ″|² is even: integrate over ξ > 0 and double
    let step = grid.dxi() / SPECTRAL_REFINEMENT as f64;
    let count = (grid.xi_max() / step) as usize;
    let values: Vec<_> = (0..=count + 1).map(|k| model.value(k as f64 * step)).collect();
    let mut acc = 0.0;
    for k in 1..=count {
        let second = (values[k + 1] - values[k] * 2.0 + values[k - 1]) / (step * step);
        let w = if k == count { 0.5 } else { 1.0 };
        acc += w * second.norm_sqr();
    }
    // k = 0: ĥ″(0) = 0 for λ > 1 is the limit of the one-sided differences
    let x4_spectral = 2.0 * acc * step / (2.0 * std::f64::consts::PI);

    Ok(HMoments {
        l2,
        x4,
        x4_spectral,
        interp: interpolation_constant(lambda) * l2.powf(0.25 * (3.0 - lambda)) * x4.powf(0.25 * (1.0 + lambda)),
        direct,
    })
}

/// `∫₀^∞ s^{λ−2} g(s, λ, 2) ds`, the factor in the Jensen step; finite for
/// `1 < λ < 2`.
pub fn jensen_factor(order: StableOrder) -> Result<f64> {
    let lambda = check_open_order(order)?;
    let params = MixtureParams::new(lambda, 2.0)?;
    // s = e^u; the integrand behaves like e^{(2λ−2)u} as u → −∞ and e^{−2u} as u → ∞
    let lo = -40.0 / (2.0 * lambda - 2.0);
    let hi = 20.0;
    doubling_trapezoid(
        |u| {
            let s = u.exp();
            s.powf(lambda - 1.0) * mixture_weight(s, params)
        },
        lo,
        hi,
        1e-12,
        "Jensen factor",
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FinitenessCertificate {
    pub lambda: f64,
    /// `I_λ(p_λ)`.
    pub fisher: f64,
    /// `∫ g_λ²(A + B|x|^{1+λ})`.
    pub envelope_bound: f64,
    pub jensen_factor: f64,
    pub envelope: TailEnvelope,
    pub tolerance: f64,
    /// Fitted log-log slope of `|g_λ|` over the outer half of the window.
    pub g_tail_exponent: f64,
}

impl FinitenessCertificate {
    pub fn holds(&self) -> bool {
        self.fisher.is_finite()
            && self.envelope_bound.is_finite()
            && self.jensen_factor.is_finite()
            && self.fisher <= self.envelope_bound + self.tolerance
    }
}

/// The certificate `I_λ(p_λ) ≤ ∫g_λ²(A + B|x|^{1+λ}) < ∞` for the Linnik law.
pub fn finiteness_certificate(order: StableOrder, grid: &GridSpec) -> Result<FinitenessCertificate> {
    let lambda = check_open_order(order)?;
    let p = linnik_density(order, grid, LinnikMethod::Inversion)?;
    let fisher = relative_fisher(&p, order, 1.0)?;
    let envelope = tail_envelope_fit(&p, order)?;
    let g = inverse_transform(&linnik_g_spectrum_analytic(order, grid)?)?;
    let n = grid.n_points();
    let weighted = |j: usize| {
        let x = grid.x(j).abs();
        g.samples()[j].powi(2) * (envelope.a + envelope.b * x.powf(1.0 + lambda))
    };
    let envelope_bound = (0..n).map(weighted).sum::<f64>() * grid.dx();
    let envelope_tail = algebraic_tail(grid.x(n - 1), weighted(n - 1), grid.x(3 * n / 4), weighted(3 * n / 4)).0
        + algebraic_tail(grid.x(0), weighted(0), grid.x(n / 4), weighted(n / 4)).0;
    let jensen = jensen_factor(order)?;
    let (outer, inner) = (n - 1, 3 * n / 4);
    let g_tail_exponent =
        (g.samples()[outer].abs() / g.samples()[inner].abs()).ln() / (grid.x(outer) / grid.x(inner)).ln();
    let result = FinitenessCertificate {
        lambda,
        fisher: fisher.value,
        envelope_bound: envelope_bound + envelope_tail,
        jensen_factor: jensen,
        envelope,
        tolerance: TOLERANCE_FACTOR * fisher.truncation_estimate,
        g_tail_exponent,
    };
    if !(result.fisher.is_finite() && result.envelope_bound.is_finite() && jensen.is_finite()) {
        return Err(Error::Convergence(format!(
            "finiteness certificate has a non-finite component: {result:?}"
        )));
    }
    Ok(result)
}
