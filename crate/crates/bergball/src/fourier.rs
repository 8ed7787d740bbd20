//! Fourier helpers on uniform circle grids.
//!
//! Samples live on the grid `theta_j = 2 pi j / N`. The forward transform
//! is normalized so that `c_k = (1/N) sum_j u_j e^{-i k theta_j}`, making
//! `c_0` the grid mean; frequencies wrap to the symmetric range and the
//! Nyquist mode of an even-length grid is treated as non-oscillating
//! (derivative zero).

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Normalized Fourier coefficients of real samples on the uniform circle
/// grid, indexed `0, 1, ..., N-1` with frequency `k = idx` for
/// `idx <= N/2` and `k = idx - N` above.
pub(crate) fn coefficients(samples: &[f64]) -> Result<Vec<Complex64>> {
    if samples.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "circle grid needs at least 4 samples, got {}",
            samples.len()
        )));
    }
    let n = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    for c in &mut buf {
        *c /= n as f64;
    }
    Ok(buf)
}

/// Signed frequency of coefficient index `idx` on a grid of length `n`.
pub(crate) fn frequency(idx: usize, n: usize) -> i64 {
    if idx <= n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// Spectral derivative `du/dtheta` of real samples on the uniform grid.
pub(crate) fn spectral_derivative(samples: &[f64]) -> Result<Vec<f64>> {
    let n = samples.len();
    let mut buf: Vec<Complex64> = coefficients(samples)?;
    for (idx, c) in buf.iter_mut().enumerate() {
        if n % 2 == 0 && idx == n / 2 {
            *c = Complex64::new(0.0, 0.0);
            continue;
        }
        *c *= Complex64::new(0.0, frequency(idx, n) as f64);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    Ok(buf.iter().map(|c| c.re).collect())
}
