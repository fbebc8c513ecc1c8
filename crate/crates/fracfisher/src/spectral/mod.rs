//! Grids, the continuous Fourier pair on sampled profiles, and Fourier multipliers.
//!
//! The transform convention is `f̂(ξ) = ∫ e^{−iξx} f(x) dx`. On samples it is
//! the trapezoid sum `dx·Σ_j f_j e^{−iξ_k x_j}` with the grid centre at `x = 0`.
mod fft;
mod grid;
mod io;
mod model;
mod ops;
mod profile;
pub(crate) mod synth;

pub use grid::{make_grid, GridSpec};
pub use io::{read_profile_csv, read_spectrum_csv, write_profile_csv, write_spectrum_csv};
pub use model::{Multiplier, SpectralModel};
pub use ops::{
    apply_multiplier, convolve, forward_transform, fractional_derivative, inverse_transform, riesz_constant,
    riesz_potential, SYMMETRY_TOLERANCE,
};
pub use profile::{DensityProfile, RealProfile, SpectralProfile, DEFAULT_MASS_TOLERANCE, NEGATIVE_CLIP};

pub(crate) use fft::padded_multiply;
