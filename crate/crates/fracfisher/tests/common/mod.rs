//! Independent numerical oracles shared by the integration tests.
//!
//! Nothing here calls into the library: the oracles evaluate inversion
//! integrals pointwise by plain Gauss–Legendre quadrature so that the
//! FFT-based code paths are checked against a different method.
#![allow(dead_code)]

use std::f64::consts::PI;

use fracfisher::spectral::GridSpec;
use fracfisher::Complex64;

/// A small grid for fast structural tests.
pub fn small_grid() -> GridSpec {
    GridSpec::new(4096, 60.0).unwrap()
}

/// The reference grid, `N = 2^16`, `x_max = 200`.
pub fn reference_grid() -> GridSpec {
    GridSpec::new(1 << 16, 200.0).unwrap()
}

/// Γ(x) for x > 0: upward recurrence to x ≥ 12, then the Stirling series.
pub fn gamma(x: f64) -> f64 {
    assert!(x > 0.0);
    let mut shift = 1.0;
    let mut z = x;
    while z < 12.0 {
        shift *= z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0)))));
    let ln = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series;
    ln.exp() / shift
}

const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

/// Composite five-point Gauss–Legendre rule with `panels` equal panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (t, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            acc += w * f(mid + 0.5 * h * t);
        }
    }
    0.5 * h * acc
}

/// `∫₀^R w(r) dr` for an oscillatory `w` with frequency up to `|x|`: the
/// substitution `r = u²` on `[0, 1]` smooths `|ξ|^α` cusps at the origin, and
/// panels on `[1, R]` are short enough to resolve `cos(rx)`.
fn oscillatory<W: Fn(f64) -> f64>(w: W, x: f64, r_max: f64) -> f64 {
    let head = integrate(|u| 2.0 * u * w(u * u), 0.0, 1.0, 400);
    let panels = ((r_max - 1.0) * (1.0 + x.abs()) * 2.0).ceil() as usize + 200;
    head + integrate(w, 1.0, r_max, panels)
}

/// `(1/π)∫₀^R F(r) cos(rx) dr`: the inverse transform of an even real spectrum.
pub fn even_inversion<F: Fn(f64) -> f64>(spectrum: F, x: f64, r_max: f64) -> f64 {
    oscillatory(|r| spectrum(r) * (r * x).cos(), x, r_max) / PI
}

/// Inverse transform of the odd spectrum `i·sign(ξ)·G(|ξ|)`: `−(1/π)∫₀^R G(r) sin(rx) dr`.
pub fn odd_inversion<F: Fn(f64) -> f64>(spectrum: F, x: f64, r_max: f64) -> f64 {
    -oscillatory(|r| spectrum(r) * (r * x).sin(), x, r_max) / PI
}

/// `∫₀^∞ e^{−r|x|} w(r) dr` in the variable `r = e^v`, for `w` vanishing
/// algebraically at `r = 0`.
fn laplace_type<W: Fn(f64) -> f64>(w: W, x: f64) -> f64 {
    let hi = (60.0 / x.abs().max(1e-12)).ln().max(1.0);
    integrate(
        |v| {
            let r = v.exp();
            r * (-r * x.abs()).exp() * w(r)
        },
        -60.0,
        hi,
        ((hi + 60.0) * 12.0) as usize,
    )
}

/// The Linnik density by deforming the inversion contour onto the imaginary
/// axis: `p(x) = (1/π)∫₀^∞ e^{−r|x|} r^λ sin θ / (1 + 2r^λ cos θ + r^{2λ}) dr`,
/// `θ = πλ/2`. Valid for `x ≠ 0`.
pub fn linnik_contour(lambda: f64, x: f64) -> f64 {
    let theta = 0.5 * PI * lambda;
    laplace_type(
        |r| {
            let rl = r.powf(lambda);
            rl * theta.sin() / (1.0 + 2.0 * rl * theta.cos() + rl * rl)
        },
        x,
    ) / PI
}

/// `g_λ`, the inverse transform of `iξ|ξ|^{2λ−2}/(1+|ξ|^λ)²`, on the same
/// contour: `g(x) = −sign(x)/π ∫₀^∞ e^{−r|x|} Re[G(ir)] dr` with
/// `G(z) = z^{2λ−1}/(1+z^λ)²`.
pub fn linnik_g_contour(lambda: f64, x: f64) -> f64 {
    let w = |r: f64| {
        let iz = |a: f64| Complex64::from_polar(r.powf(a), 0.5 * PI * a);
        let den = Complex64::new(1.0, 0.0) + iz(lambda);
        (iz(2.0 * lambda - 1.0) / (den * den)).re
    };
    -x.signum() * laplace_type(w, x) / PI
}

/// `2∫₀^X g_λ²/p_λ dx`, the relative fractional Fisher information of the
/// Linnik law restricted to `|x| < X`.
pub fn linnik_fisher_window(lambda: f64, x_max: f64) -> f64 {
    let mut edges = vec![
        0.0, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0,
    ];
    edges.retain(|&e| e < x_max);
    edges.push(x_max);
    let integrand = |x: f64| linnik_g_contour(lambda, x).powi(2) / linnik_contour(lambda, x);
    2.0 * edges
        .windows(2)
        .map(|w| integrate(integrand, w[0], w[1], 24))
        .sum::<f64>()
}

/// `p_λ(0) = 1 / (λ sin(π/λ))`.
pub fn linnik_at_zero(lambda: f64) -> f64 {
    1.0 / (lambda * (PI / lambda).sin())
}

/// `∫₀^∞ s^{λ−2} g(s, λ, 2) ds = (2/λ) sin((1−μ)θ) / sin(μπ)`, `μ = 2 − 2/λ`,
/// `θ = πλ/2`, from the Mellin transform of `1/(1 + 2t cos θ + t²)`.
pub fn jensen_closed_form(lambda: f64) -> f64 {
    let beta = lambda - 2.0;
    let mu = (beta + lambda) / lambda;
    let theta = 0.5 * PI * lambda;
    (2.0 / lambda) * ((1.0 - mu) * theta).sin() / (mu * PI).sin()
}

/// `c = Γ(λ) sin(πλ/2) / π`.
pub fn tail_constant(lambda: f64) -> f64 {
    gamma(lambda) * (0.5 * PI * lambda).sin() / PI
}

/// Max of `|a_j − b_j|` over the samples.
pub fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// The grid index closest to `x`.
pub fn index_of(grid: &GridSpec, x: f64) -> usize {
    (grid.center() as f64 + x / grid.dx()).round() as usize
}
