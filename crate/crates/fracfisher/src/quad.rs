//! Small one-dimensional quadrature helpers shared by the modules.

use crate::{Error, Result};

const GL8_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_W: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// 8-point Gauss–Legendre rule on `[a, b]`.
pub(crate) fn gauss8<T, F>(f: F, a: f64, b: f64) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    F: Fn(f64) -> T,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = T::default();
    for (x, w) in GL8_X.iter().zip(GL8_W) {
        acc = acc + (f(mid - half * x) + f(mid + half * x)) * w;
    }
    acc * half
}

/// Trapezoid rule on `[a, b]`, doubling the node count until successive
/// estimates differ by less than `tol`.
pub(crate) fn doubling_trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, what: &str) -> Result<f64> {
    let mut panels = 64usize;
    let mut h = (b - a) / panels as f64;
    let mut sum = 0.5 * (f(a) + f(b)) + (1..panels).map(|i| f(a + i as f64 * h)).sum::<f64>();
    let mut estimate = sum * h;
    for _ in 0..16 {
        // the new nodes are the midpoints of the current panels
        let mid: f64 = (0..panels).map(|i| f(a + (i as f64 + 0.5) * h)).sum();
        sum += mid;
        panels *= 2;
        h *= 0.5;
        let next = sum * h;
        if !next.is_finite() {
            return Err(Error::Convergence(format!("{what}: non-finite estimate")));
        }
        if (next - estimate).abs() < tol {
            return Ok(next);
        }
        estimate = next;
    }
    Err(Error::Convergence(format!(
        "{what}: trapezoid change still above {tol:.1e} after node doubling"
    )))
}

/// Integral over `[edge, ∞)` of an algebraically decaying sampled function,
/// extrapolated from its values at `edge` and at an inner abscissa.
///
/// Returns `(integral, exponent)` where `exponent` is the fitted log-log slope.
/// The integral is infinite when the fit does not decay faster than `1/x`,
/// unless the edge value is already negligible in absolute terms.
pub(crate) fn algebraic_tail(x_edge: f64, v_edge: f64, x_inner: f64, v_inner: f64) -> (f64, f64) {
    let (x_edge, x_inner) = (x_edge.abs(), x_inner.abs());
    let (v_edge, v_inner) = (v_edge.abs(), v_inner.abs());
    if v_edge == 0.0 {
        return (0.0, f64::NEG_INFINITY);
    }
    let scale = v_edge * x_edge;
    let exponent = if v_inner > 0.0 && x_edge > x_inner {
        (v_edge / v_inner).ln() / (x_edge / x_inner).ln()
    } else {
        f64::NAN
    };
    if exponent < -1.0 {
        (scale / (-exponent - 1.0), exponent)
    } else if scale < 1e-14 {
        (scale, exponent)
    } else {
        (f64::INFINITY, exponent)
    }
}
