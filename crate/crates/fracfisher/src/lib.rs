//! Fractional Fisher information on spectral grids.
//!
//! The library works with one-dimensional symmetric densities sampled on a
//! uniform grid, together with (when available) an exact description of their
//! characteristic function. Around that it builds:
//!
//! - [`spectral`]: grids, the continuous Fourier pair `f̂(ξ) = ∫ e^{-iξx} f(x) dx`
//!   approximated by scaled FFTs, Riesz potentials, fractional derivatives and
//!   convolution;
//! - [`distributions`]: symmetric stable and Linnik densities, the Laplace base
//!   law, the mixing weight `g(s, a, b)` and tail envelopes;
//! - [`information`]: fractional scores and the relative fractional Fisher
//!   information `I_{λ,υ}`;
//! - [`clt`]: normalized sums `T_n`, the scaling identity, smoothing, the
//!   Blachman–Stam type inequality, monotonicity sweeps and a Monte Carlo
//!   U-statistic variance check;
//! - [`entropy`]: the fractional heat semigroup and the relative entropy
//!   `H_λ = ∫₀^∞ I_{λ,1+t}(f_t) dt`;
//! - [`attraction`]: domain-of-attraction diagnostics and the finiteness
//!   certificate for the Linnik law.
//!
//! ```
//! use fracfisher::{distributions, information, spectral::GridSpec};
//!
//! let grid = GridSpec::new(4096, 60.0).unwrap();
//! let order = distributions::StableOrder::new(1.5).unwrap();
//! let z = distributions::stable_density(order, &grid).unwrap();
//! let report = information::relative_fisher(&z, order, 1.0).unwrap();
//! assert!(report.value < 1e-8);
//! ```

pub mod attraction;
pub mod clt;
pub mod distributions;
pub mod entropy;
mod error;
pub mod information;
mod quad;
pub mod spectral;

pub use error::{Error, Result};
pub use rustfft::num_complex::Complex64;
