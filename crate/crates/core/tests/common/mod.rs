//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's spectral or waterfilling code.
#![allow(dead_code)]

use std::f64::consts::PI;

use rustfft::num_complex::Complex;

pub const PAPER_LAGS: [f64; 3] = [1.0, 0.3, 0.4];

/// Closed form `1 + 0.6 cos w + 0.8 cos 2w`.
pub fn paper_spectrum(w: f64) -> f64 {
    1.0 + 0.6 * w.cos() + 0.8 * (2.0 * w).cos()
}

/// Midpoint-free fine grid of the closed-form spectrum over `[-pi, pi)`.
pub fn fine_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|j| paper_spectrum(-PI + 2.0 * PI * j as f64 / points as f64))
        .collect()
}

pub fn oracle_distortion(grid: &[f64], phi: f64) -> f64 {
    grid.iter().map(|s| s.min(phi)).sum::<f64>() / grid.len() as f64
}

pub fn oracle_rate(grid: &[f64], phi: f64) -> f64 {
    grid.iter()
        .map(|s| {
            if *s > phi {
                0.5 * (s / phi).log2()
            } else {
                0.0
            }
        })
        .sum::<f64>()
        / grid.len() as f64
}

/// Plain bisection, fixed iteration count.
pub fn oracle_water_level(grid: &[f64], target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, grid.iter().copied().fold(0.0, f64::max));
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if oracle_distortion(grid, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Minimum-phase factor of the MA(2) spectrum: `S(w) = |h0 + h1 e^{-iw} + h2 e^{-2iw}|^2`.
///
/// `z^2 S(z) = 0.4 z^4 + 0.3 z^3 + z^2 + 0.3 z + 0.4` is palindromic, so with
/// `u = z + 1/z` it becomes `0.4 u^2 + 0.3 u + 0.2 = 0`. Each `u` gives
/// `z^2 - u z + 1 = 0`; the roots inside the unit circle are the MA zeros
/// `z1, z2` and `c_2 = h0 h2 = h0^2 z1 z2`. Returns `h0`.
pub fn spectral_factor_h0() -> f64 {
    let (a, b, c) = (0.4, 0.3, 0.2);
    let disc = Complex::new(b * b - 4.0 * a * c, 0.0).sqrt();
    let us = [(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)];
    let zeros: Vec<Complex<f64>> = us
        .iter()
        .map(|u: &Complex<f64>| {
            let d = (u * u - 4.0).sqrt();
            let (r1, r2) = ((u + d) / 2.0, (u - d) / 2.0);
            if r1.norm() < 1.0 {
                r1
            } else {
                r2
            }
        })
        .collect();
    let product = zeros[0] * zeros[1];
    assert!(product.im.abs() < 1e-12, "zeros must be a conjugate pair");
    (PAPER_LAGS[2] / product.re).sqrt()
}

/// Biased sample autocovariance, written out directly.
pub fn sample_lag(x: &[f64], m: usize) -> f64 {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    (0..n - m)
        .map(|k| (x[k] - mean) * (x[k + m] - mean))
        .sum::<f64>()
        / n as f64
}

/// Hann-windowed Welch auto-spectrum at FFT bin order, normalized so the
/// mean over bins equals the variance. Independent of the library's estimator.
pub fn welch_bins(x: &[f64], seg: usize) -> Vec<f64> {
    let window: Vec<f64> = (0..seg)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / seg as f64).cos())
        .collect();
    let norm: f64 = window.iter().map(|w| w * w).sum();
    let fft = rustfft::FftPlanner::<f64>::new().plan_fft_forward(seg);
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let mut acc = vec![0.0; seg];
    let mut count = 0;
    let mut start = 0;
    while start + seg <= x.len() {
        let mut buf: Vec<Complex<f64>> = (0..seg)
            .map(|i| Complex::new((x[start + i] - mean) * window[i], 0.0))
            .collect();
        fft.process(&mut buf);
        for (a, c) in acc.iter_mut().zip(&buf) {
            *a += c.norm_sqr();
        }
        count += 1;
        start += seg / 2;
    }
    acc.iter().map(|a| a / (norm * count as f64)).collect()
}
