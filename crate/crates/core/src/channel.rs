//! Block spectral filter realizing the rate-distortion optimal test channel.
//!
//! Per frequency the channel is `X_hat = a X + W` with `a = max(0, 1 - phi/S)`
//! and `Var(W) = a phi`, giving expected error `min(S, phi)` and revealed
//! power `max(S - phi, 0)`. Traces are processed in 50%-overlapped blocks with
//! square-root Hann analysis and synthesis windows, which sum to unity.

use std::f64::consts::PI;
use std::ops::Range;

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::SpectralDensity;
use crate::synth::{stream_rng, SANITIZE_STREAM};

const MIN_FFT_SIZE: usize = 64;

/// Gains and injected noise variances on the nonnegative-frequency bins
/// `k = 0..=N/2` of an `N`-point block transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterPlan {
    pub phi: f64,
    pub fft_size: usize,
    pub gains: Vec<f64>,
    pub noise_vars: Vec<f64>,
}

fn check_block(fft_size: usize) -> Result<()> {
    if fft_size < MIN_FFT_SIZE || !fft_size.is_power_of_two() {
        return Err(Error::BadBlock(format!(
            "block length must be a power of two and at least {MIN_FFT_SIZE}, got {fft_size}"
        )));
    }
    Ok(())
}

impl FilterPlan {
    /// Builds a plan from explicit per-bin values, e.g. a pass-through plan
    /// with unit gains for testing the windowing.
    pub fn from_parts(phi: f64, gains: Vec<f64>, noise_vars: Vec<f64>) -> Result<Self> {
        let fft_size = 2 * gains.len().saturating_sub(1);
        check_block(fft_size)?;
        if noise_vars.len() != gains.len() {
            return Err(Error::LengthMismatch {
                left: gains.len(),
                right: noise_vars.len(),
            });
        }
        if gains.iter().any(|g| !(0.0..=1.0).contains(g)) {
            return Err(Error::InvalidInput("gains must lie in [0, 1]".into()));
        }
        if noise_vars.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidInput(
                "noise variances must be finite and nonnegative".into(),
            ));
        }
        Ok(Self {
            phi,
            fft_size,
            gains,
            noise_vars,
        })
    }

    /// Number of bins with nonzero gain.
    pub fn passband_bins(&self) -> usize {
        self.gains.iter().filter(|g| **g > 0.0).count()
    }

    fn bin(&self, k: usize) -> usize {
        k.min(self.fft_size - k)
    }
}

/// Plans the filter at water level `phi`; the spectrum is linearly
/// interpolated to the block's bin frequencies `2 pi k / N`.
pub fn plan_filter(s: &SpectralDensity, phi: f64, fft_size: usize) -> Result<FilterPlan> {
    check_block(fft_size)?;
    if !(phi.is_finite() && phi > 0.0) {
        return Err(Error::InvalidInput(format!(
            "water level must be positive, got {phi}"
        )));
    }
    let (gains, noise_vars) = (0..=fft_size / 2)
        .map(|k| {
            let power = s.interpolate(2.0 * PI * k as f64 / fft_size as f64);
            let gain = if power > phi { 1.0 - phi / power } else { 0.0 };
            (gain, gain * phi)
        })
        .unzip();
    Ok(FilterPlan {
        phi,
        fft_size,
        gains,
        noise_vars,
    })
}

/// A sanitized trace. The first and last `warmup` samples sit under a single
/// window ramp and are excluded from distortion accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct Sanitized {
    pub samples: Vec<f64>,
    pub warmup: usize,
}

impl Sanitized {
    pub fn steady_state(&self) -> Range<usize> {
        let n = self.samples.len();
        self.warmup.min(n)..n.saturating_sub(self.warmup).max(self.warmup.min(n))
    }
}

/// Applies `plan` block by block. Noise is drawn in the frequency domain with
/// Hermitian symmetry so the output stays real; identical inputs and seed
/// give bitwise-identical output.
pub fn sanitize(series: &[f64], plan: &FilterPlan, seed: u64) -> Result<Sanitized> {
    let n_fft = plan.fft_size;
    check_block(n_fft)?;
    if plan.gains.len() != n_fft / 2 + 1 || plan.noise_vars.len() != plan.gains.len() {
        return Err(Error::BadBlock(
            "plan bin count does not match its block length".into(),
        ));
    }
    let n = series.len();
    if n < n_fft {
        return Err(Error::TooShort {
            needed: n_fft,
            got: n,
        });
    }
    let hop = n_fft / 2;
    let frames = (hop + n - 1) / hop + 1;
    let mut padded = vec![0.0; (frames + 1) * hop];
    padded[hop..hop + n].copy_from_slice(series);
    let mut out = vec![0.0; padded.len()];

    let window: Vec<f64> = (0..n_fft)
        .map(|i| (PI * i as f64 / n_fft as f64).sin())
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n_fft);
    let inverse = planner.plan_fft_inverse(n_fft);
    let mut rng = stream_rng(seed, SANITIZE_STREAM);
    let noise_scale: Vec<f64> = plan
        .noise_vars
        .iter()
        .map(|v| (n_fft as f64 * v).sqrt())
        .collect();
    let mut buf = vec![Complex::new(0.0, 0.0); n_fft];

    for f in 0..frames {
        let start = f * hop;
        for i in 0..n_fft {
            buf[i] = Complex::new(padded[start + i] * window[i], 0.0);
        }
        forward.process(&mut buf);
        for (k, c) in buf.iter_mut().enumerate() {
            *c *= plan.gains[plan.bin(k)];
        }
        for k in 0..=hop {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            if k == 0 || k == hop {
                buf[k].re += noise_scale[k] * re;
            } else {
                let v = Complex::new(re, im) * (noise_scale[k] * std::f64::consts::FRAC_1_SQRT_2);
                buf[k] += v;
                buf[n_fft - k] += v.conj();
            }
        }
        inverse.process(&mut buf);
        let norm = 1.0 / n_fft as f64;
        for i in 0..n_fft {
            out[start + i] += buf[i].re * norm * window[i];
        }
    }
    Ok(Sanitized {
        samples: out[hop..hop + n].to_vec(),
        warmup: hop,
    })
}

/// Mean squared difference between two equal-length traces.
pub fn measure_distortion(original: &[f64], sanitized: &[f64]) -> Result<f64> {
    if original.len() != sanitized.len() {
        return Err(Error::LengthMismatch {
            left: original.len(),
            right: sanitized.len(),
        });
    }
    if original.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    let sum: f64 = original
        .iter()
        .zip(sanitized)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / original.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{psd_from_autocorrelation, AutocorrelationSequence};

    fn ramp(n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| ((i * 7919) % 101) as f64 / 10.0 - 5.0 + (i as f64 * 0.01).sin())
            .collect()
    }

    #[test]
    fn flat_plan_values() {
        let s = SpectralDensity::flat(1.0, 256).unwrap();
        let plan = plan_filter(&s, 0.25, 64).unwrap();
        assert_eq!(plan.gains.len(), 33);
        assert!(plan.gains.iter().all(|g| (g - 0.75).abs() < 1e-15));
        assert!(plan.noise_vars.iter().all(|v| (v - 0.1875).abs() < 1e-15));
    }

    #[test]
    fn paper_plan_suppresses_band_around_minimum() {
        let acf = AutocorrelationSequence::new(vec![1.0, 0.3, 0.4]).unwrap();
        let s = psd_from_autocorrelation(&acf, 4096).unwrap();
        let plan = plan_filter(&s, 0.5, 1024).unwrap();
        // S(w) = 0.5 edges, found by bisection on the analytic spectrum.
        let root = |mut lo: f64, mut hi: f64| {
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if (acf.evaluate(lo) - 0.5) * (acf.evaluate(mid) - 0.5) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let w0 = (-3.0f64 / 16.0).acos();
        let (left, right) = (root(0.0, w0), root(w0, PI));
        for (k, g) in plan.gains.iter().enumerate() {
            let w = 2.0 * PI * k as f64 / 1024.0;
            if w > left + 0.01 && w < right - 0.01 {
                assert_eq!(*g, 0.0, "bin {k} at {w}");
                assert_eq!(plan.noise_vars[k], 0.0);
            }
            if w < left - 0.01 || w > right + 0.01 {
                assert!(*g > 0.0, "bin {k} at {w}");
            }
        }
    }

    #[test]
    fn full_suppression_gives_silence() {
        let s = SpectralDensity::flat(1.0, 128).unwrap();
        let plan = plan_filter(&s, 1.0, 64).unwrap();
        assert_eq!(plan.passband_bins(), 0);
        let out = sanitize(&ramp(300), &plan, 1).unwrap();
        assert!(out.samples.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn identity_plan_reconstructs() {
        let plan = FilterPlan::from_parts(0.0, vec![1.0; 65], vec![0.0; 65]).unwrap();
        let x = ramp(1000);
        let out = sanitize(&x, &plan, 9).unwrap();
        assert_eq!(out.samples.len(), x.len());
        let max_err = x
            .iter()
            .zip(&out.samples)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_err < 1e-9, "{max_err}");
    }

    #[test]
    fn bad_blocks_and_short_input() {
        let s = SpectralDensity::flat(1.0, 128).unwrap();
        assert!(matches!(plan_filter(&s, 0.5, 48), Err(Error::BadBlock(_))));
        assert!(matches!(plan_filter(&s, 0.5, 32), Err(Error::BadBlock(_))));
        assert!(plan_filter(&s, 0.0, 64).is_err());
        let plan = plan_filter(&s, 0.5, 64).unwrap();
        assert_eq!(
            sanitize(&[0.0; 63], &plan, 0),
            Err(Error::TooShort {
                needed: 64,
                got: 63
            })
        );
    }

    #[test]
    fn deterministic_per_seed() {
        let s = SpectralDensity::flat(1.0, 128).unwrap();
        let plan = plan_filter(&s, 0.3, 64).unwrap();
        let x = ramp(500);
        let a = sanitize(&x, &plan, 5).unwrap();
        let b = sanitize(&x, &plan, 5).unwrap();
        let c = sanitize(&x, &plan, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn distortion_measure() {
        let x = vec![1.0, -1.0, 2.0, -2.0];
        assert_eq!(measure_distortion(&x, &x).unwrap(), 0.0);
        assert_eq!(measure_distortion(&x, &[0.0; 4]).unwrap(), 2.5);
        assert_eq!(
            measure_distortion(&x, &[0.0; 3]),
            Err(Error::LengthMismatch { left: 4, right: 3 })
        );
    }

    #[test]
    fn steady_state_excludes_half_blocks() {
        let s = Sanitized {
            samples: vec![0.0; 100],
            warmup: 32,
        };
        assert_eq!(s.steady_state(), 32..68);
        let s = Sanitized {
            samples: vec![0.0; 50],
            warmup: 32,
        };
        assert!(s.steady_state().is_empty());
    }
}
