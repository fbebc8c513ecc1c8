//! Centred-order FFT helpers implementing the trapezoid-quadrature transform pair.

use std::cell::RefCell;
use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place unnormalized DFT of a centred array (index `n/2` is the origin),
/// producing a centred array.
pub(crate) fn dft_centered(data: &mut [Complex64], direction: FftDirection) {
    let n = data.len();
    data.rotate_left(n / 2);
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft(n, direction));
    fft.process(data);
    data.rotate_left(n / 2);
}

/// `F(ξ_k) = dx·Σ_j f_j e^{−iξ_k x_j}`.
pub(crate) fn forward(samples: &[f64], dx: f64) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    dft_centered(&mut data, FftDirection::Forward);
    data.iter_mut().for_each(|v| *v *= dx);
    data
}

/// `f_j = (1/L)·Σ_k F_k e^{iξ_k x_j}` with period `L = N·dx`.
pub(crate) fn inverse(spectrum: &[Complex64], dx: f64) -> Vec<Complex64> {
    let mut data = spectrum.to_vec();
    dft_centered(&mut data, FftDirection::Inverse);
    let scale = 1.0 / (data.len() as f64 * dx);
    data.iter_mut().for_each(|v| *v *= scale);
    data
}

/// Applies a Fourier multiplier to samples embedded in a zero-padded window
/// `padding` times wider, then crops back; this treats the samples as a
/// function vanishing outside the grid instead of one period of a periodic
/// function.
pub(crate) fn padded_multiply<M: Fn(f64) -> Complex64>(
    samples: &[f64],
    dx: f64,
    padding: usize,
    multiplier: M,
) -> Vec<Complex64> {
    let n = samples.len();
    let big = n * padding;
    let offset = (big - n) / 2;
    let mut data = vec![Complex64::new(0.0, 0.0); big];
    for (d, &v) in data[offset..offset + n].iter_mut().zip(samples) {
        *d = Complex64::new(v, 0.0);
    }
    dft_centered(&mut data, FftDirection::Forward);
    let dxi = 2.0 * PI / (big as f64 * dx);
    for (k, v) in data.iter_mut().enumerate() {
        *v *= multiplier((k as f64 - (big / 2) as f64) * dxi);
    }
    dft_centered(&mut data, FftDirection::Inverse);
    let scale = 1.0 / big as f64;
    data[offset..offset + n].iter().map(|v| v * scale).collect()
}
