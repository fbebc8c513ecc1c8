//! Normalized sums `T_n = n^{−1/λ}(X_1 + … + X_n)`, stable smoothing, and the
//! inequalities relating their fractional Fisher informations: scaling,
//! smoothing contraction, the Blachman–Stam analogue, monotonicity along
//! `T_n` with rate, and the U-statistic variance drop behind it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::distributions::StableOrder;
use crate::error::check_range;
use crate::information::{relative_fisher, FisherReport};
use crate::spectral::{
    forward_transform, inverse_transform, DensityProfile, GridSpec, RealProfile, SpectralModel, SpectralProfile,
};
use crate::{Error, Result};

/// Largest `n` accepted by [`monotonicity_sweep`].
pub const MAX_SWEEP_N: usize = 32;

/// Tolerance multiplier applied to truncation estimates in inequality checks.
pub const TOLERANCE_FACTOR: f64 = 10.0;

/// `f̂` at `scale·ξ_k`, by 4-point Lagrange interpolation of the sampled
/// spectrum; zero beyond the band.
fn rescaled_spectrum(spectrum: &SpectralProfile, scale: f64) -> Vec<Complex64> {
    let samples = spectrum.samples();
    let n = samples.len();
    let half = (n / 2) as f64;
    (0..n)
        .map(|k| {
            let p = (k as f64 - half) * scale + half;
            let i = p.floor();
            let t = p - i;
            let i = i as isize;
            if t == 0.0 && i >= 0 && (i as usize) < n {
                return samples[i as usize];
            }
            if i < 1 || i + 2 >= n as isize {
                return Complex64::new(0.0, 0.0);
            }
            let i = i as usize;
            let w = [
                -t * (t - 1.0) * (t - 2.0) / 6.0,
                (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
                -(t + 1.0) * t * (t - 2.0) / 2.0,
                (t + 1.0) * t * (t - 1.0) / 6.0,
            ];
            samples[i - 1] * w[0] + samples[i] * w[1] + samples[i + 1] * w[2] + samples[i + 2] * w[3]
        })
        .collect()
}

fn from_spectrum(grid: GridSpec, spectrum: Vec<Complex64>) -> Result<DensityProfile> {
    DensityProfile::new(inverse_transform(&SpectralProfile::new(grid, spectrum)?)?)
}

/// Density of `T_n`, the spectrum `f̂(ξ·n^{−1/λ})^n`.
pub fn normalized_sum_density(f: &DensityProfile, n: usize, order: StableOrder) -> Result<DensityProfile> {
    check_range("n", n >= 1, || format!("must be at least 1, got {n}"))?;
    if n == 1 {
        return Ok(f.clone());
    }
    let scale = (n as f64).powf(-1.0 / order.lambda());
    let grid = *f.grid();
    match f.model() {
        Some(model) => DensityProfile::new(RealProfile::from_model(model.dilate(scale).power(n as u32), grid)?),
        None => {
            let spectrum = rescaled_spectrum(&forward_transform(f.profile()), scale);
            from_spectrum(grid, spectrum.iter().map(|v| v.powi(n as i32)).collect())
        }
    }
}

/// Density of `aX`, `(1/a)·f(x/a)`.
///
/// Without an exact spectrum the samples are interpolated (cubic) and mass
/// pushed beyond the window is lost, which the mass check reports.
pub fn rescale_density(f: &DensityProfile, a: f64) -> Result<DensityProfile> {
    check_range("scale", a > 0.0 && a.is_finite(), || {
        format!("must be positive, got {a}")
    })?;
    if a == 1.0 {
        return Ok(f.clone());
    }
    let grid = *f.grid();
    match f.model() {
        Some(model) => DensityProfile::new(RealProfile::from_model(model.dilate(a), grid)?),
        None => {
            let samples = f.samples();
            let n = samples.len();
            let values = grid
                .xs()
                .iter()
                .map(|x| {
                    let p = x / a / grid.dx() + (n / 2) as f64;
                    cubic_at(samples, p) / a
                })
                .collect();
            DensityProfile::new(RealProfile::new(grid, values)?)
        }
    }
}

fn cubic_at(samples: &[f64], p: f64) -> f64 {
    let n = samples.len() as isize;
    let i = p.floor() as isize;
    let t = p - i as f64;
    let at = |j: isize| if (0..n).contains(&j) { samples[j as usize] } else { 0.0 };
    if i < -1 || i > n {
        return 0.0;
    }
    -t * (t - 1.0) * (t - 2.0) / 6.0 * at(i - 1) + (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0 * at(i)
        - (t + 1.0) * t * (t - 2.0) / 2.0 * at(i + 1)
        + (t + 1.0) * t * (t - 1.0) / 6.0 * at(i + 2)
}

/// Density of `X_ε = (1−ε)^{1/λ}X + ε^{1/λ}Z`, spectrum `f̂(ξ(1−ε)^{1/λ})·e^{−ε|ξ|^λ}`.
pub fn smooth_with_stable(f: &DensityProfile, eps: f64, order: StableOrder) -> Result<DensityProfile> {
    check_range("eps", (0.0..1.0).contains(&eps), || {
        format!("must lie in [0, 1), got {eps}")
    })?;
    if eps == 0.0 {
        return Ok(f.clone());
    }
    let lambda = order.lambda();
    let scale = (1.0 - eps).powf(1.0 / lambda);
    let grid = *f.grid();
    match f.model() {
        Some(model) => DensityProfile::new(RealProfile::from_model(
            model.dilate(scale).product(&SpectralModel::stable(lambda, eps)),
            grid,
        )?),
        None => {
            let spectrum = rescaled_spectrum(&forward_transform(f.profile()), scale);
            let smoothed = spectrum
                .iter()
                .enumerate()
                .map(|(k, v)| v * (-eps * grid.xi(k).abs().powf(lambda)).exp())
                .collect();
            from_spectrum(grid, smoothed)
        }
    }
}

/// Density of `δ^{1/λ}X_1 + (1−δ)^{1/λ}X_2` for independent `X_1 ~ f1`, `X_2 ~ f2`.
pub fn weighted_sum_density(
    f1: &DensityProfile,
    f2: &DensityProfile,
    delta: f64,
    order: StableOrder,
) -> Result<DensityProfile> {
    check_range("delta", delta > 0.0 && delta < 1.0, || {
        format!("must lie in (0, 1), got {delta}")
    })?;
    if f1.grid() != f2.grid() {
        return Err(Error::GridMismatch);
    }
    let lambda = order.lambda();
    let (a, b) = (delta.powf(1.0 / lambda), (1.0 - delta).powf(1.0 / lambda));
    let grid = *f1.grid();
    match (f1.model(), f2.model()) {
        (Some(m1), Some(m2)) => {
            DensityProfile::new(RealProfile::from_model(m1.dilate(a).product(&m2.dilate(b)), grid)?)
        }
        _ => {
            let s1 = rescaled_spectrum(&forward_transform(f1.profile()), a);
            let s2 = rescaled_spectrum(&forward_transform(f2.profile()), b);
            from_spectrum(grid, s1.iter().zip(&s2).map(|(x, y)| x * y).collect())
        }
    }
}

/// A numerical inequality `lhs ≤ rhs + tolerance`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
}

impl InequalityCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + self.tolerance
    }

    /// `rhs − lhs`; positive when the inequality is strict.
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// Both sides of an identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// Truncation allowance of the two sides combined.
    pub tolerance: f64,
}

impl IdentityCheck {
    /// `|lhs − rhs| / max(|lhs|, |rhs|)`, zero when both vanish.
    pub fn relative_gap(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.lhs - self.rhs).abs() / scale
        }
    }
}

fn tolerance(reports: &[&FisherReport]) -> f64 {
    TOLERANCE_FACTOR * reports.iter().fold(0.0f64, |m, r| m.max(r.truncation_estimate))
}

/// `I_{λ,υ}(υ^{1/λ}X)` against `υ^{−2(1−1/λ)}·I_λ(X)`.
pub fn scaling_identity_check(f: &DensityProfile, order: StableOrder, upsilon: f64) -> Result<IdentityCheck> {
    check_range("upsilon", upsilon > 0.0 && upsilon.is_finite(), || {
        format!("must be positive, got {upsilon}")
    })?;
    let lambda = order.lambda();
    let base = relative_fisher(f, order, 1.0)?;
    let scaled = rescale_density(f, upsilon.powf(1.0 / lambda))?;
    let lhs = relative_fisher(&scaled, order, upsilon)?;
    let factor = upsilon.powf(-2.0 * (1.0 - 1.0 / lambda));
    Ok(IdentityCheck {
        lhs: lhs.value,
        rhs: factor * base.value,
        tolerance: TOLERANCE_FACTOR * (lhs.truncation_estimate + factor * base.truncation_estimate),
    })
}

/// `I_λ(X_ε) ≤ (1−ε)^{2/λ}·I_λ(X)`.
pub fn smoothing_contraction_check(f: &DensityProfile, eps: f64, order: StableOrder) -> Result<InequalityCheck> {
    let base = relative_fisher(f, order, 1.0)?;
    let smoothed = relative_fisher(&smooth_with_stable(f, eps, order)?, order, 1.0)?;
    Ok(InequalityCheck {
        lhs: smoothed.value,
        rhs: (1.0 - eps).powf(2.0 / order.lambda()) * base.value,
        tolerance: tolerance(&[&base, &smoothed]),
    })
}

/// `I_λ(δ^{1/λ}X_1 + (1−δ)^{1/λ}X_2) ≤ δ^{2/λ}I_λ(X_1) + (1−δ)^{2/λ}I_λ(X_2)`.
pub fn blachman_stam_check(
    f1: &DensityProfile,
    f2: &DensityProfile,
    delta: f64,
    order: StableOrder,
) -> Result<InequalityCheck> {
    let lambda = order.lambda();
    let sum = weighted_sum_density(f1, f2, delta, order)?;
    let i1 = relative_fisher(f1, order, 1.0)?;
    let i2 = relative_fisher(f2, order, 1.0)?;
    let is = relative_fisher(&sum, order, 1.0)?;
    Ok(InequalityCheck {
        lhs: is.value,
        rhs: delta.powf(2.0 / lambda) * i1.value + (1.0 - delta).powf(2.0 / lambda) * i2.value,
        tolerance: tolerance(&[&i1, &i2, &is]),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepEntry {
    pub n: usize,
    pub fisher: FisherReport,
    /// `((n−1)/n)^{(2−λ)/λ}·I_λ(T_{n−1})`; absent for `n = 1`.
    pub step_bound: Option<f64>,
    /// `n^{−(2−λ)/λ}·I_λ(X)`.
    pub global_bound: f64,
    pub step_tolerance: f64,
    pub global_tolerance: f64,
}

impl SweepEntry {
    pub fn step_holds(&self) -> bool {
        self.step_bound
            .is_none_or(|b| self.fisher.value <= b + self.step_tolerance)
    }

    pub fn global_holds(&self) -> bool {
        self.fisher.value <= self.global_bound + self.global_tolerance
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub lambda: f64,
    pub entries: Vec<SweepEntry>,
}

impl SweepReport {
    pub fn bounds_hold(&self) -> bool {
        self.entries.iter().all(|e| e.step_holds() && e.global_holds())
    }

    /// Whether `I_λ(T_n)` never increases by more than the step tolerance.
    pub fn non_increasing(&self) -> bool {
        self.entries
            .windows(2)
            .all(|w| w[1].fisher.value <= w[0].fisher.value + w[1].step_tolerance)
    }

    /// CSV with columns `n, fisher_value, step_bound, global_bound, truncation`;
    /// the step bound of `n = 1` is empty.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "fisher_value", "step_bound", "global_bound", "truncation"])?;
        for e in &self.entries {
            w.write_record([
                e.n.to_string(),
                format!("{:e}", e.fisher.value),
                e.step_bound.map(|b| format!("{b:e}")).unwrap_or_default(),
                format!("{:e}", e.global_bound),
                format!("{:e}", e.fisher.truncation_estimate),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// `I_λ(T_n)` for `n = 1..=n_max` with the step and global bounds.
///
/// Tolerances are ten times the summed truncation estimates of the compared
/// values: `T_n` and `T_{n−1}` for the step bound, `T_n` and `X` for the global one.
pub fn monotonicity_sweep(f: &DensityProfile, order: StableOrder, n_max: usize) -> Result<SweepReport> {
    check_range("n_max", (1..=MAX_SWEEP_N).contains(&n_max), || {
        format!("must lie in 1..={MAX_SWEEP_N}, got {n_max}")
    })?;
    let rate = order.rate_exponent();
    let mut entries: Vec<SweepEntry> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let tn = normalized_sum_density(f, n, order)?;
        let fisher = relative_fisher(&tn, order, 1.0).map_err(|e| match e {
            Error::NonFinite { what, x } => Error::Convergence(format!("{what} non-finite at x = {x} for n = {n}")),
            other => other,
        })?;
        if !fisher.value.is_finite() {
            return Err(Error::Convergence(format!("non-finite Fisher information at n = {n}")));
        }
        let (step_bound, step_tolerance) = match entries.last() {
            Some(prev) => (
                Some(((n - 1) as f64 / n as f64).powf(rate) * prev.fisher.value),
                TOLERANCE_FACTOR * (fisher.truncation_estimate + prev.fisher.truncation_estimate),
            ),
            None => (None, 0.0),
        };
        let first = entries.first().map(|e| e.fisher).unwrap_or(fisher);
        entries.push(SweepEntry {
            n,
            fisher,
            step_bound,
            global_bound: (n as f64).powf(-rate) * first.value,
            step_tolerance,
            global_tolerance: TOLERANCE_FACTOR * (fisher.truncation_estimate + first.truncation_estimate),
        });
    }
    Ok(SweepReport {
        lambda: order.lambda(),
        entries,
    })
}

/// Symmetric, mean-zero kernels with closed-form second moments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kernel {
    /// `Φ = (x_1 + … + x_m)/m`; `Φ = x` for `m = 1`.
    Linear,
    /// `Φ = x_1·…·x_m`.
    Product,
    /// `Φ = ((x_1² − E x²) + … + (x_m² − E x²))/m`.
    CenteredSquare,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseLaw {
    /// Standard normal.
    Gaussian,
    /// Density `e^{−|x|}/2`.
    Laplace,
}

impl BaseLaw {
    fn moments(self) -> (f64, f64) {
        match self {
            BaseLaw::Gaussian => (1.0, 3.0),
            BaseLaw::Laplace => (2.0, 24.0),
        }
    }

    fn sample<R: Rng>(self, rng: &mut R) -> f64 {
        match self {
            BaseLaw::Gaussian => rng.sample(StandardNormal),
            BaseLaw::Laplace => {
                let e: f64 = rng.sample(Exp1);
                if rng.random::<bool>() {
                    e
                } else {
                    -e
                }
            }
        }
    }
}

impl Kernel {
    fn eval(self, xs: &[f64], ex2: f64) -> f64 {
        let m = xs.len() as f64;
        match self {
            Kernel::Linear => xs.iter().sum::<f64>() / m,
            Kernel::Product => xs.iter().product(),
            Kernel::CenteredSquare => xs.iter().map(|x| x * x - ex2).sum::<f64>() / m,
        }
    }

    /// `E[Φ²]` under the base law.
    pub fn second_moment(self, m: usize, law: BaseLaw) -> f64 {
        let (ex2, ex4) = law.moments();
        match self {
            Kernel::Linear => ex2 / m as f64,
            Kernel::Product => ex2.powi(m as i32),
            Kernel::CenteredSquare => (ex4 - ex2 * ex2) / m as f64,
        }
    }
}

/// Outcome of [`variance_drop_mc`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VarianceDrop {
    /// Monte Carlo estimate of `E[U²]`.
    pub var_u: f64,
    /// `(m/n)·E[Φ²]`.
    pub bound: f64,
    /// Standard error of `var_u`.
    pub stderr: f64,
}

impl VarianceDrop {
    /// `var_u ≤ bound + 3·stderr`.
    pub fn holds(&self) -> bool {
        self.var_u <= self.bound + 3.0 * self.stderr
    }
}

pub const MIN_MC_SAMPLES: usize = 10_000;
const MC_CHUNKS: u64 = 16;

/// Monte Carlo estimate of the second moment of the U-statistic
/// `U = C(n,m)^{−1} Σ_{|S|=m} Φ(X_S)` against `(m/n)·E[Φ²]`.
///
/// The samples are split into 16 fixed chunks, chunk `k` drawing from the
/// ChaCha8 stream `k` of `seed`, so the result depends only on the arguments.
pub fn variance_drop_mc(
    n: usize,
    m: usize,
    kernel: Kernel,
    base_law: BaseLaw,
    samples: usize,
    seed: u64,
) -> Result<VarianceDrop> {
    check_range("m", m >= 1 && m <= n, || {
        format!("must satisfy 1 ≤ m ≤ n, got m={m}, n={n}")
    })?;
    check_range("n", n <= 8, || format!("must be at most 8, got {n}"))?;
    check_range("samples", samples >= MIN_MC_SAMPLES, || {
        format!("must be at least {MIN_MC_SAMPLES}, got {samples}")
    })?;
    let subsets: Vec<Vec<usize>> = (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == m)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    let (ex2, _) = base_law.moments();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut x = vec![0.0; n];
    let mut picked = vec![0.0; m];
    for chunk in 0..MC_CHUNKS {
        let count = samples / MC_CHUNKS as usize + usize::from((chunk as usize) < samples % MC_CHUNKS as usize);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        for _ in 0..count {
            x.iter_mut().for_each(|v| *v = base_law.sample(&mut rng));
            let u = subsets
                .iter()
                .map(|s| {
                    for (p, &i) in picked.iter_mut().zip(s) {
                        *p = x[i];
                    }
                    kernel.eval(&picked, ex2)
                })
                .sum::<f64>()
                / subsets.len() as f64;
            let u2 = u * u;
            sum += u2;
            sum_sq += u2 * u2;
        }
    }
    let count = samples as f64;
    let mean = sum / count;
    let var = (sum_sq / count - mean * mean).max(0.0) * count / (count - 1.0);
    Ok(VarianceDrop {
        var_u: mean,
        bound: m as f64 / n as f64 * kernel.second_moment(m, base_law),
        stderr: (var / count).sqrt(),
    })
}
