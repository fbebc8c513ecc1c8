//! Exact characteristic functions and the multiplier expressions built on them.

use std::sync::Arc;

use rustfft::num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Fourier multipliers acting on spectra.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Multiplier {
    /// `|ξ|^α`, the multiplier of the Riesz potential `R_α`.
    Riesz(f64),
    /// `i·sign(ξ)·|ξ|^α`, the multiplier of `D_α`.
    FractionalDerivative(f64),
}

impl Multiplier {
    /// Value of the multiplier; zero at `ξ = 0` by convention.
    pub fn value(self, xi: f64) -> Complex64 {
        if xi == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match self {
            Multiplier::Riesz(a) => Complex64::new(xi.abs().powf(a), 0.0),
            Multiplier::FractionalDerivative(a) => I * xi.signum() * xi.abs().powf(a),
        }
    }

    fn order(self) -> f64 {
        match self {
            Multiplier::Riesz(a) | Multiplier::FractionalDerivative(a) => a,
        }
    }

    /// `m(aξ) = |a|^α·parity(a)·m(ξ)`.
    fn parity(self, a: f64) -> f64 {
        match self {
            Multiplier::Riesz(_) => 1.0,
            Multiplier::FractionalDerivative(_) => a.signum(),
        }
    }

    /// Whether the multiplier is a polynomial in `ξ` (`ξ^{2k}` or `iξ^{2k+1}`).
    fn is_smooth(self) -> bool {
        match self {
            Multiplier::Riesz(a) => a >= 0.0 && a.fract() == 0.0 && (a as u64).is_multiple_of(2),
            Multiplier::FractionalDerivative(a) => a >= 0.0 && a.fract() == 0.0 && (a as u64) % 2 == 1,
        }
    }

    fn derivative(self, xi: f64) -> Complex64 {
        if xi == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match self {
            Multiplier::Riesz(a) => Complex64::new(a * xi.signum() * xi.abs().powf(a - 1.0), 0.0),
            Multiplier::FractionalDerivative(a) => I * a * xi.abs().powf(a - 1.0),
        }
    }
}

/// An exactly known spectrum `φ(ξ)` of a real function, together with its
/// derivative `φ'(ξ)`.
///
/// Models are immutable expression trees; cloning is cheap. Every model is
/// Hermitian (`φ(−ξ) = conj φ(ξ)`) because it describes a real function.
#[derive(Clone, Debug)]
pub struct SpectralModel(Arc<Node>);

#[derive(Debug)]
enum Node {
    Stable {
        lambda: f64,
        scale: f64,
    },
    Linnik {
        lambda: f64,
    },
    Gaussian {
        variance: f64,
    },
    Dilation {
        inner: SpectralModel,
        factor: f64,
    },
    Power {
        inner: SpectralModel,
        exponent: u32,
    },
    Product(SpectralModel, SpectralModel),
    Combination(Vec<(f64, SpectralModel)>),
    Multiplied {
        inner: SpectralModel,
        multiplier: Multiplier,
    },
    ScoreNumerator {
        inner: SpectralModel,
        alpha: f64,
        offset: f64,
    },
    LinnikScore {
        lambda: f64,
    },
    MixtureKernel {
        lambda: f64,
    },
}

impl SpectralModel {
    fn node(node: Node) -> Self {
        Self(Arc::new(node))
    }

    /// `e^{−scale·|ξ|^λ}`: the stable law of order λ at time `scale`.
    pub fn stable(lambda: f64, scale: f64) -> Self {
        Self::node(Node::Stable { lambda, scale })
    }

    /// `1 / (1 + |ξ|^λ)`.
    pub fn linnik(lambda: f64) -> Self {
        Self::node(Node::Linnik { lambda })
    }

    /// `e^{−variance·ξ²/2}`.
    pub fn gaussian(variance: f64) -> Self {
        Self::node(Node::Gaussian { variance })
    }

    /// `iξ|ξ|^{2λ−2} / (1 + |ξ|^λ)²`, the closed-form spectrum of
    /// `D_{λ−1}p + (x/λ)p` for the Linnik density `p`.
    pub fn linnik_score(lambda: f64) -> Self {
        Self::node(Node::LinnikScore { lambda })
    }

    /// `(2i/λ)·ξ|ξ|^λ / (1 + ξ²)²`, the kernel appearing when the Linnik score
    /// is written through its Laplace mixture.
    pub fn mixture_kernel(lambda: f64) -> Self {
        Self::node(Node::MixtureKernel { lambda })
    }

    /// Spectrum of `aX` when `self` is the spectrum of `X`: `φ(aξ)`.
    pub fn dilate(&self, factor: f64) -> Self {
        if factor == 1.0 {
            return self.clone();
        }
        Self::node(Node::Dilation {
            inner: self.clone(),
            factor,
        })
    }

    pub fn power(&self, exponent: u32) -> Self {
        if exponent == 1 {
            return self.clone();
        }
        Self::node(Node::Power {
            inner: self.clone(),
            exponent,
        })
    }

    pub fn product(&self, other: &SpectralModel) -> Self {
        Self::node(Node::Product(self.clone(), other.clone()))
    }

    pub fn combination(terms: Vec<(f64, SpectralModel)>) -> Self {
        Self::node(Node::Combination(terms))
    }

    pub fn multiply(&self, multiplier: Multiplier) -> Self {
        Self::node(Node::Multiplied {
            inner: self.clone(),
            multiplier,
        })
    }

    /// Leading non-smooth terms of the spectrum at `ξ = 0`, as
    /// `φ(ξ) ≈ smooth + Σ c·m(ξ)`.
    ///
    /// They fix the algebraic decay of the function in physical space; the
    /// synthesis carries them in closed form. Only first-order terms are
    /// tracked, which is enough to push the remainder's decay well past the
    /// padded window.
    pub(crate) fn singular_terms(&self) -> Vec<(f64, Multiplier)> {
        let mut terms = match &*self.0 {
            Node::Stable { lambda, scale } => vec![(-scale, Multiplier::Riesz(*lambda))],
            Node::Linnik { lambda } => vec![(-1.0, Multiplier::Riesz(*lambda))],
            Node::Gaussian { .. } => Vec::new(),
            Node::Dilation { inner, factor } => inner
                .singular_terms()
                .into_iter()
                .map(|(c, m)| (c * factor.abs().powf(m.order()) * m.parity(*factor), m))
                .collect(),
            Node::Power { inner, exponent } => {
                let n = *exponent as i32;
                let scale = n as f64 * inner.mass().powi(n - 1);
                inner
                    .singular_terms()
                    .into_iter()
                    .map(|(c, m)| (scale * c, m))
                    .collect()
            }
            Node::Product(a, b) => {
                let (ma, mb) = (a.mass(), b.mass());
                let mut t: Vec<_> = a.singular_terms().into_iter().map(|(c, m)| (mb * c, m)).collect();
                t.extend(b.singular_terms().into_iter().map(|(c, m)| (ma * c, m)));
                t
            }
            Node::Combination(parts) => parts
                .iter()
                .flat_map(|(w, m)| m.singular_terms().into_iter().map(move |(c, k)| (w * c, k)))
                .collect(),
            Node::Multiplied { inner, multiplier } => vec![(inner.mass(), *multiplier)],
            Node::ScoreNumerator { inner, alpha, offset } => {
                // i·sign|ξ|^α φ(0) + i·offset·(c|ξ|^β)' = … + offset·c·β·(i·sign|ξ|^{β−1})
                let mut t = vec![(inner.mass(), Multiplier::FractionalDerivative(*alpha))];
                for (c, m) in inner.singular_terms() {
                    if let Multiplier::Riesz(beta) = m {
                        t.push((offset * c * beta, Multiplier::FractionalDerivative(beta - 1.0)));
                    }
                }
                t
            }
            Node::LinnikScore { lambda } => vec![(1.0, Multiplier::FractionalDerivative(2.0 * lambda - 1.0))],
            Node::MixtureKernel { lambda } => vec![(2.0 / lambda, Multiplier::FractionalDerivative(1.0 + lambda))],
        };
        // merge equal multipliers (exact cancellations are common) and drop smooth ones
        let mut merged: Vec<(f64, Multiplier)> = Vec::new();
        for (c, m) in terms.drain(..) {
            match merged.iter_mut().find(|(_, k)| *k == m) {
                Some(entry) => entry.0 += c,
                None => merged.push((c, m)),
            }
        }
        merged.retain(|(c, m)| *c != 0.0 && !m.is_smooth());
        merged
    }

    /// Spectrum of `D_α f + offset·x·f`, i.e. `i·sign(ξ)|ξ|^α φ + i·offset·φ'`.
    pub fn score_numerator(&self, alpha: f64, offset: f64) -> Self {
        Self::node(Node::ScoreNumerator {
            inner: self.clone(),
            alpha,
            offset,
        })
    }

    pub fn value(&self, xi: f64) -> Complex64 {
        let re = |v: f64| Complex64::new(v, 0.0);
        match &*self.0 {
            Node::Stable { lambda, scale } => re((-scale * xi.abs().powf(*lambda)).exp()),
            Node::Linnik { lambda } => re(1.0 / (1.0 + xi.abs().powf(*lambda))),
            Node::Gaussian { variance } => re((-0.5 * variance * xi * xi).exp()),
            Node::Dilation { inner, factor } => inner.value(factor * xi),
            Node::Power { inner, exponent } => inner.value(xi).powi(*exponent as i32),
            Node::Product(a, b) => a.value(xi) * b.value(xi),
            Node::Combination(terms) => terms.iter().map(|(c, m)| m.value(xi) * *c).sum(),
            Node::Multiplied { inner, multiplier } => multiplier.value(xi) * inner.value(xi),
            Node::ScoreNumerator { inner, alpha, offset } => {
                Multiplier::FractionalDerivative(*alpha).value(xi) * inner.value(xi)
                    + I * *offset * inner.derivative(xi)
            }
            Node::LinnikScore { lambda } => {
                if xi == 0.0 {
                    return re(0.0);
                }
                // iξ|ξ|^{2λ−2}/(1+|ξ|^λ)², arranged so that large |ξ| cannot overflow
                let a = xi.abs();
                let v = if a <= 1.0 {
                    let p = a.powf(*lambda);
                    a.powf(2.0 * lambda - 1.0) / ((1.0 + p) * (1.0 + p))
                } else {
                    let q = 1.0 + a.powf(-lambda);
                    1.0 / (a * q * q)
                };
                I * xi.signum() * v
            }
            Node::MixtureKernel { lambda } => {
                if xi == 0.0 {
                    return re(0.0);
                }
                let a = xi.abs();
                let v = if a <= 1.0 {
                    let d = 1.0 + a * a;
                    a.powf(1.0 + lambda) / (d * d)
                } else {
                    let q = 1.0 + 1.0 / (a * a);
                    a.powf(lambda - 3.0) / (q * q)
                };
                I * xi.signum() * (2.0 / lambda) * v
            }
        }
    }

    /// `φ'(ξ)`; analytic for the distributional nodes, central differences for
    /// the derived score spectra.
    pub fn derivative(&self, xi: f64) -> Complex64 {
        let re = |v: f64| Complex64::new(v, 0.0);
        match &*self.0 {
            Node::Stable { lambda, scale } => {
                if xi == 0.0 {
                    return re(0.0);
                }
                let a = xi.abs();
                let e = (-scale * a.powf(*lambda)).exp();
                if e == 0.0 {
                    return re(0.0);
                }
                re(-scale * lambda * xi.signum() * a.powf(lambda - 1.0) * e)
            }
            Node::Linnik { lambda } => {
                if xi == 0.0 {
                    return re(0.0);
                }
                let a = xi.abs();
                let d = 1.0 + a.powf(*lambda);
                re(-lambda * xi.signum() * a.powf(lambda - 1.0) / (d * d))
            }
            Node::Gaussian { variance } => re(-variance * xi * (-0.5 * variance * xi * xi).exp()),
            Node::Dilation { inner, factor } => inner.derivative(factor * xi) * *factor,
            Node::Power { inner, exponent } => {
                let n = *exponent as i32;
                inner.value(xi).powi(n - 1) * inner.derivative(xi) * n as f64
            }
            Node::Product(a, b) => a.derivative(xi) * b.value(xi) + a.value(xi) * b.derivative(xi),
            Node::Combination(terms) => terms.iter().map(|(c, m)| m.derivative(xi) * *c).sum(),
            Node::Multiplied { inner, multiplier } => {
                multiplier.derivative(xi) * inner.value(xi) + multiplier.value(xi) * inner.derivative(xi)
            }
            Node::ScoreNumerator { .. } | Node::LinnikScore { .. } | Node::MixtureKernel { .. } => {
                let h = 1e-6 * xi.abs().max(1.0);
                (self.value(xi + h) - self.value(xi - h)) / (2.0 * h)
            }
        }
    }

    /// Total mass `φ(0)` of the function the model describes.
    pub fn mass(&self) -> f64 {
        self.value(0.0).re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn numeric_derivative(m: &SpectralModel, xi: f64) -> Complex64 {
        let h = 1e-6;
        (m.value(xi + h) - m.value(xi - h)) / (2.0 * h)
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(SpectralModel::linnik(1.5).value(1.0).re, 0.5);
        assert_eq!(SpectralModel::stable(1.5, 1.0).value(0.0).re, 1.0);
        let g = SpectralModel::linnik_score(1.5).value(1.0);
        assert!((g - Complex64::new(0.0, 0.25)).norm() < 1e-15);
        assert_eq!(SpectralModel::linnik_score(1.5).value(0.0).norm(), 0.0);
    }

    #[test]
    fn linnik_score_is_score_numerator_of_linnik() {
        for lambda in [1.2, 1.5, 1.8] {
            let direct = SpectralModel::linnik_score(lambda);
            let built = SpectralModel::linnik(lambda).score_numerator(lambda - 1.0, 1.0 / lambda);
            for xi in [-40.0, -3.0, -0.2, 0.01, 0.7, 2.5, 1e4] {
                let (a, b) = (direct.value(xi), built.value(xi));
                assert!((a - b).norm() <= 1e-10 * a.norm().max(1e-300), "{lambda} {xi}");
            }
        }
    }

    #[test]
    fn stable_score_numerator_vanishes() {
        let m = SpectralModel::stable(1.3, 1.0).score_numerator(0.3, 1.0 / 1.3);
        for xi in [-5.0, -0.5, 0.1, 1.0, 3.0] {
            assert!(m.value(xi).norm() < 1e-15);
        }
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let base = SpectralModel::linnik(1.4);
        let composite = base
            .dilate(0.7)
            .power(3)
            .product(&SpectralModel::stable(1.4, 0.3))
            .multiply(Multiplier::Riesz(0.4));
        let models = [
            base.clone(),
            SpectralModel::stable(1.7, 2.0),
            SpectralModel::gaussian(2.0),
            composite,
            SpectralModel::combination(vec![(0.3, base.clone()), (0.7, SpectralModel::gaussian(1.0))]),
        ];
        for m in &models {
            for xi in [-2.3, -0.4, 0.3, 1.1, 6.0] {
                let (a, b) = (m.derivative(xi), numeric_derivative(m, xi));
                assert!((a - b).norm() < 1e-7, "{m:?} at {xi}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn huge_arguments_do_not_produce_nan() {
        let models = [
            SpectralModel::linnik(1.2),
            SpectralModel::linnik_score(1.2),
            SpectralModel::mixture_kernel(1.8),
            SpectralModel::stable(1.5, 1.0).score_numerator(0.5, 0.5),
            SpectralModel::linnik(1.5).dilate(0.5).power(8),
        ];
        for m in &models {
            for xi in [1e100, 1e250, -1e300] {
                assert!(m.value(xi).re.is_finite() && m.value(xi).im.is_finite(), "{m:?}");
                assert!(m.derivative(xi).re.is_finite(), "{m:?}");
            }
        }
    }
}
