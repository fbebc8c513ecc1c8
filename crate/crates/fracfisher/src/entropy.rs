//! The fractional heat semigroup `û(ξ,t) = û₀(ξ)e^{−|ξ|^{2α}t}` and the
//! fractional relative entropy `H_λ(X) = ∫₀^∞ I_{λ,1+t}(f_t) dt` along it.

use serde::Serialize;

use crate::clt::{InequalityCheck, TOLERANCE_FACTOR};
use crate::distributions::StableOrder;
use crate::error::check_range;
use crate::information::relative_fisher;
use crate::spectral::{
    forward_transform, inverse_transform, DensityProfile, RealProfile, SpectralModel, SpectralProfile,
};
use crate::{Error, Result};

pub const DEFAULT_T_MAX: f64 = 50.0;
pub const DEFAULT_NODES: usize = 64;

/// `f_t` with spectrum `f̂(ξ)e^{−|ξ|^{2α}t}`, `1/2 < α ≤ 1`.
///
/// No mass tolerance is enforced: spreading pushes mass out of the window
/// and the growing deficit is recorded on the result.
pub fn evolve(f: &DensityProfile, t: f64, alpha: f64) -> Result<DensityProfile> {
    check_range("t", t >= 0.0 && t.is_finite(), || {
        format!("must be nonnegative, got {t}")
    })?;
    check_range("alpha", alpha > 0.5 && alpha <= 1.0, || {
        format!("must lie in (1/2, 1], got {alpha}")
    })?;
    if t == 0.0 {
        return Ok(f.clone());
    }
    let grid = *f.grid();
    let profile = match f.model() {
        Some(model) => RealProfile::from_model(model.product(&SpectralModel::stable(2.0 * alpha, t)), grid)?,
        None => {
            let spectrum = forward_transform(f.profile());
            let evolved = spectrum
                .samples()
                .iter()
                .enumerate()
                .map(|(k, v)| v * (-grid.xi(k).abs().powf(2.0 * alpha) * t).exp())
                .collect();
            inverse_transform(&SpectralProfile::new(grid, evolved)?)?
        }
    };
    Ok(DensityProfile::unchecked(profile))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub lambda: f64,
    /// Quadrature of the integrand over `[0, t_max]`.
    pub value: f64,
    pub t_max: f64,
    pub nodes: usize,
    /// Upper bound of the integral over `[t_max, ∞)`.
    pub tail_bound: f64,
    /// `I_λ(f)`.
    pub fisher_at_zero: f64,
    /// Difference between the full and the every-other-node quadrature,
    /// a conservative estimate of the quadrature error.
    pub quadrature_error: f64,
    /// Summed truncation estimates of the integrand, weighted like the quadrature.
    pub truncation: f64,
    /// `(t, I_{λ,1+t}(f_t))` at every node.
    #[serde(skip)]
    pub trace: Vec<(f64, f64)>,
}

impl EntropyReport {
    /// `value + tail_bound`, an upper estimate of `H_λ`.
    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }

    /// CSV with columns `t, integrand`.
    pub fn trace_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["t", "integrand"])?;
        for (t, h) in &self.trace {
            w.write_record([format!("{t:e}"), format!("{h:e}")])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// `t_k = (1 + t_max)^{k/(K−1)} − 1`: equispaced in `u = ln(1+t)`.
pub fn time_nodes(t_max: f64, nodes: usize) -> Vec<f64> {
    let top = (1.0 + t_max).ln();
    (0..nodes)
        .map(|k| (top * k as f64 / (nodes - 1) as f64).exp_m1())
        .collect()
}

/// `H_λ(f)` by the trapezoid rule in `u = ln(1+t)` over `[0, t_max]`.
///
/// Scaling and the smoothing contraction give `I_{λ,1+t}(f_t) ≤ I_λ(f)/(1+t)²`,
/// so the remainder beyond `t_max` is at most `I_λ(f)/(1 + t_max)`.
pub fn relative_entropy_lambda(
    f: &DensityProfile,
    order: StableOrder,
    t_max: f64,
    nodes: usize,
) -> Result<EntropyReport> {
    check_range("t_max", t_max > 0.0 && t_max.is_finite(), || {
        format!("must be positive, got {t_max}")
    })?;
    check_range("nodes", nodes >= 3, || format!("must be at least 3, got {nodes}"))?;
    let lambda = order.lambda();
    let ts = time_nodes(t_max, nodes);
    let mut trace = Vec::with_capacity(nodes);
    let mut truncations = Vec::with_capacity(nodes);
    for &t in &ts {
        let ft = evolve(f, t, 0.5 * lambda)?;
        let report = relative_fisher(&ft, order, 1.0 + t)?;
        if !report.value.is_finite() {
            return Err(Error::NonFinite {
                what: "entropy integrand at time",
                x: t,
            });
        }
        trace.push((t, report.value));
        truncations.push(report.truncation_estimate);
    }
    let du = (1.0 + t_max).ln() / (nodes - 1) as f64;
    // trapezoid in u over nodes first..=last taken every `step`
    let rule = |values: &[f64], first: usize, last: usize, step: usize| {
        (first..=last)
            .step_by(step)
            .map(|k| {
                let w = if k == first || k == last { 0.5 } else { 1.0 };
                w * values[k] * (1.0 + ts[k])
            })
            .sum::<f64>()
            * du
            * step as f64
    };
    let h: Vec<f64> = trace.iter().map(|(_, v)| *v).collect();
    let last = nodes - 1;
    let value = rule(&h, 0, last, 1);
    // coarse rule on every other node; an odd last interval keeps the fine rule
    let even = last - last % 2;
    let coarse = rule(&h, 0, even, 2) + if even < last { rule(&h, even, last, 1) } else { 0.0 };
    let quadrature_error = (value - coarse).abs();
    let truncation = rule(&truncations, 0, last, 1);
    let fisher_at_zero = h[0];
    Ok(EntropyReport {
        lambda,
        value,
        t_max,
        nodes,
        tail_bound: fisher_at_zero / (1.0 + t_max),
        fisher_at_zero,
        quadrature_error,
        truncation,
        trace,
    })
}

/// `H_λ(f) ≤ λ/(2−λ)·I_λ(f)`, with `H_λ` estimated from above by quadrature
/// plus tail bound, for `1 < λ < 2`.
pub fn entropy_bound_check(f: &DensityProfile, order: StableOrder) -> Result<InequalityCheck> {
    let lambda = order.lambda();
    check_range("lambda", lambda < 2.0, || {
        "the entropy bound needs lambda < 2".to_string()
    })?;
    let report = relative_entropy_lambda(f, order, DEFAULT_T_MAX, DEFAULT_NODES)?;
    Ok(entropy_check_from(&report))
}

/// The bound check for an already computed report.
pub fn entropy_check_from(report: &EntropyReport) -> InequalityCheck {
    let lambda = report.lambda;
    InequalityCheck {
        lhs: report.upper(),
        rhs: lambda / (2.0 - lambda) * report.fisher_at_zero,
        tolerance: TOLERANCE_FACTOR * report.truncation + report.quadrature_error,
    }
}
