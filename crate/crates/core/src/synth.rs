//! Seeded synthesis of stationary Gaussian traces with a prescribed
//! autocovariance, by circulant embedding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::spectrum::{AutocorrelationSequence, SpectralDensity};

pub(crate) const PROCESS_STREAM: u64 = 0;
pub(crate) const INFERENCE_STREAM: u64 = 1;
pub(crate) const SANITIZE_STREAM: u64 = 2;

const MIN_LENGTH: usize = 1024;
const EIGEN_TOL: f64 = 1e-9;

/// Independent RNG streams derived from one user seed.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Second-order description of the process to synthesize.
#[derive(Debug, Clone, PartialEq)]
pub enum Covariance {
    Acf(AutocorrelationSequence),
    /// Lags are recovered by inverse transform up to a quarter of the grid.
    Psd(SpectralDensity),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisSpec {
    pub covariance: Covariance,
    pub length: usize,
    pub seed: u64,
}

impl SynthesisSpec {
    pub fn new(acf: AutocorrelationSequence, length: usize, seed: u64) -> Result<Self> {
        let spec = Self {
            covariance: Covariance::Acf(acf),
            length,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_psd(psd: SpectralDensity, length: usize, seed: u64) -> Result<Self> {
        let spec = Self {
            covariance: Covariance::Psd(psd),
            length,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.length < MIN_LENGTH {
            return Err(Error::TooShort {
                needed: MIN_LENGTH,
                got: self.length,
            });
        }
        if let Covariance::Acf(acf) = &self.covariance {
            // grid-checked spectrum, at least the default resolution
            let grid = (4 * (acf.max_lag() + 1)).max(crate::DEFAULT_GRID_SIZE);
            crate::spectrum::psd_from_autocorrelation(acf, grid + grid % 2)?;
        }
        Ok(())
    }

    /// Covariance lags `c_0..` truncated below the length.
    fn lags(&self) -> Vec<f64> {
        let mut lags = match &self.covariance {
            Covariance::Acf(acf) => acf.lags().to_vec(),
            Covariance::Psd(psd) => (0..=psd.grid_size() / 4)
                .map(|m| psd.autocovariance(m))
                .collect(),
        };
        lags.truncate(self.length);
        lags
    }
}

/// Circulant embedding: the length-`2n` circulant whose first row is
/// `c_0, c_1, .., c_{n-1}, 0, c_{n-1}, .., c_1` (the middle entry is `c_n`,
/// zero here) has eigenvalues from one FFT. Scaling complex white noise by
/// their square roots and transforming back gives a stationary Gaussian
/// sequence whose real part has exactly the target covariance.
pub fn generate_process(spec: &SynthesisSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let n = spec.length;
    let size = 2 * n;
    let lags = spec.lags();
    let mut row = vec![Complex::new(0.0, 0.0); size];
    for (m, c) in lags.iter().enumerate() {
        row[m].re = *c;
        if m > 0 {
            row[size - m].re = *c;
        }
    }
    let fft = FftPlanner::<f64>::new().plan_fft_forward(size);
    fft.process(&mut row);
    let min_eigenvalue = row.iter().map(|c| c.re).fold(f64::INFINITY, f64::min);
    if min_eigenvalue < -EIGEN_TOL {
        return Err(Error::NotEmbeddable { min_eigenvalue });
    }

    let mut rng = stream_rng(spec.seed, PROCESS_STREAM);
    let mut field: Vec<Complex<f64>> = row
        .iter()
        .map(|ev| {
            let scale = (ev.re.max(0.0) / size as f64).sqrt();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(re, im) * scale
        })
        .collect();
    fft.process(&mut field);
    Ok(field[..n].iter().map(|c| c.re).collect())
}

/// `y_k = alpha x_k + z_k` with standard Gaussian `z` on its own seed stream.
pub fn generate_inference_series(x: &[f64], alpha: f64, seed: u64) -> Result<Vec<f64>> {
    if !alpha.is_finite() {
        return Err(Error::InvalidInput(format!(
            "alpha must be finite, got {alpha}"
        )));
    }
    let mut rng = stream_rng(seed, INFERENCE_STREAM);
    Ok(x.iter()
        .map(|xk| {
            let z: f64 = rng.sample(StandardNormal);
            alpha * xk + z
        })
        .collect())
}
