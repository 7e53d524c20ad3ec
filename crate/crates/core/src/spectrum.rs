//! Second-order statistics of the load process in lag and frequency domains.
//!
//! Frequencies live on a uniform grid of `M` points over `[-pi, pi)`,
//! `omega_j = -pi + 2 pi j / M`. Every `(1/2pi) * integral ... d omega`
//! in this crate is the trapezoid sum on that grid, which for a periodic
//! integrand is the plain grid mean.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values in `[-PSD_NEG_TOL, 0)` are treated as rounding noise and clamped.
pub const PSD_NEG_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-12;

/// Autocovariance `c_0..c_L` of a zero-mean stationary process, with
/// `c_{-m} = c_m` implied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAcf")]
pub struct AutocorrelationSequence {
    lags: Vec<f64>,
}

#[derive(Deserialize)]
struct RawAcf {
    lags: Vec<f64>,
}

impl TryFrom<RawAcf> for AutocorrelationSequence {
    type Error = Error;

    fn try_from(raw: RawAcf) -> Result<Self> {
        Self::new(raw.lags)
    }
}

impl AutocorrelationSequence {
    /// Checks `c_0 > 0` and `|c_m| <= c_0`. Spectral validity depends on the
    /// grid and is checked by [`psd_from_autocorrelation`] (or [`Self::validated`]).
    pub fn new(lags: Vec<f64>) -> Result<Self> {
        let c0 = *lags
            .first()
            .ok_or_else(|| Error::InvalidInput("autocovariance needs at least lag 0".into()))?;
        if let Some(bad) = lags.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("lag {bad} is not finite")));
        }
        if c0 <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "lag-0 autocovariance must be positive, got {c0}"
            )));
        }
        if let Some(m) = lags.iter().position(|c| c.abs() > c0) {
            return Err(Error::InvalidInput(format!(
                "|c_{m}| = {} exceeds c_0 = {c0}",
                lags[m].abs()
            )));
        }
        Ok(Self { lags })
    }

    /// Like [`Self::new`], and additionally rejects sequences whose spectrum
    /// goes negative on a grid of `grid_size` points.
    pub fn validated(lags: Vec<f64>, grid_size: usize) -> Result<Self> {
        let acf = Self::new(lags)?;
        psd_from_autocorrelation(&acf, grid_size)?;
        Ok(acf)
    }

    /// Sample estimates can be identically zero (constant input). Only the
    /// empirical estimator builds these.
    pub(crate) fn degenerate(lags: Vec<f64>) -> Self {
        Self { lags }
    }

    pub fn lags(&self) -> &[f64] {
        &self.lags
    }

    /// `c_0`, the process variance.
    pub fn variance(&self) -> f64 {
        self.lags[0]
    }

    /// Largest lag `L` carried.
    pub fn max_lag(&self) -> usize {
        self.lags.len() - 1
    }

    /// `c_m` for any integer lag; zero beyond `L`.
    pub fn at(&self, lag: i64) -> f64 {
        self.lags
            .get(lag.unsigned_abs() as usize)
            .copied()
            .unwrap_or(0.0)
    }

    /// Analytic spectrum `c_0 + 2 sum_m c_m cos(m omega)`.
    pub fn evaluate(&self, omega: f64) -> f64 {
        self.lags[0]
            + 2.0
                * self.lags[1..]
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * ((i + 1) as f64 * omega).cos())
                    .sum::<f64>()
    }

    /// Locates the minimum of the analytic spectrum on `[0, pi]` (the spectrum
    /// is even). A coarse scan picks the bracket, golden-section refines it.
    pub fn spectrum_minimum(&self) -> (f64, f64) {
        const SCAN: usize = 4096;
        let step = PI / SCAN as f64;
        let best = (0..=SCAN)
            .map(|i| i as f64 * step)
            .min_by(|a, b| self.evaluate(*a).total_cmp(&self.evaluate(*b)))
            .unwrap_or(0.0);
        let (mut lo, mut hi) = ((best - step).max(0.0), (best + step).min(PI));
        let ratio = (5f64.sqrt() - 1.0) / 2.0;
        let mut a = hi - ratio * (hi - lo);
        let mut b = lo + ratio * (hi - lo);
        let (mut fa, mut fb) = (self.evaluate(a), self.evaluate(b));
        for _ in 0..200 {
            if hi - lo < 1e-14 {
                break;
            }
            if fa <= fb {
                hi = b;
                b = a;
                fb = fa;
                a = hi - ratio * (hi - lo);
                fa = self.evaluate(a);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + ratio * (hi - lo);
                fb = self.evaluate(b);
            }
        }
        let omega = 0.5 * (lo + hi);
        (omega, self.evaluate(omega))
    }
}

/// Nonnegative, even power spectral density sampled on the standard grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPsd")]
pub struct SpectralDensity {
    grid_size: usize,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawPsd {
    grid_size: usize,
    values: Vec<f64>,
}

impl TryFrom<RawPsd> for SpectralDensity {
    type Error = Error;

    fn try_from(raw: RawPsd) -> Result<Self> {
        if raw.grid_size != raw.values.len() {
            return Err(Error::BadGrid(format!(
                "grid_size {} does not match {} values",
                raw.grid_size,
                raw.values.len()
            )));
        }
        Self::new(raw.values)
    }
}

impl SpectralDensity {
    /// Validates grid length, sign and even symmetry. Values within
    /// [`PSD_NEG_TOL`] below zero are clamped.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        let m = values.len();
        if m < 4 || !m.is_multiple_of(2) {
            return Err(Error::BadGrid(format!(
                "grid size must be even and at least 4, got {m}"
            )));
        }
        for (index, v) in values.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "spectrum value {index} is not finite"
                )));
            }
            if *v < -PSD_NEG_TOL {
                return Err(Error::NotPositiveSemidefinite { index, value: *v });
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let scale = values.iter().fold(1.0f64, |acc, v| acc.max(*v));
        for j in 1..m / 2 {
            if (values[j] - values[m - j]).abs() > SYMMETRY_TOL * scale {
                return Err(Error::InvalidInput(format!(
                    "spectrum is not even: S[{j}] = {} but S[{}] = {}",
                    values[j],
                    m - j,
                    values[m - j]
                )));
            }
        }
        Ok(Self {
            grid_size: m,
            values,
        })
    }

    /// Constant spectrum (white process with the given variance).
    pub fn flat(level: f64, grid_size: usize) -> Result<Self> {
        Self::new(vec![level; grid_size])
    }

    /// Builds from a function of frequency evaluated on the grid.
    pub fn from_fn(grid_size: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let step = 2.0 * PI / grid_size as f64;
        let mut values: Vec<f64> = (0..grid_size).map(|j| f(-PI + step * j as f64)).collect();
        symmetrize(&mut values);
        Self::new(values)
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Grid spacing `2 pi / M`.
    pub fn step(&self) -> f64 {
        2.0 * PI / self.grid_size as f64
    }

    pub fn omega(&self, j: usize) -> f64 {
        -PI + self.step() * j as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `(1/2pi) * integral of f(S(omega))` by the grid trapezoid rule.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.values.iter().map(|&s| f(s)).sum::<f64>() / self.grid_size as f64
    }

    /// Total power `(1/2pi) * integral S`, i.e. `c_0`.
    pub fn variance(&self) -> f64 {
        self.integrate(|s| s)
    }

    /// Inverse transform at lag `m`: `(1/2pi) * integral S cos(m omega)`.
    pub fn autocovariance(&self, lag: usize) -> f64 {
        let m = lag as f64;
        self.values
            .iter()
            .enumerate()
            .map(|(j, s)| s * (m * self.omega(j)).cos())
            .sum::<f64>()
            / self.grid_size as f64
    }

    /// Entropy power `exp((1/2pi) * integral ln S)`; zero if any bin is zero.
    pub fn entropy_power(&self) -> f64 {
        if self.values.iter().any(|&s| s <= 0.0) {
            return 0.0;
        }
        self.integrate(f64::ln).exp()
    }

    /// Linear interpolation between grid points, periodic in `omega`.
    pub fn interpolate(&self, omega: f64) -> f64 {
        let m = self.grid_size;
        let pos = (omega + PI).rem_euclid(2.0 * PI) / self.step();
        let lower = pos.floor();
        let frac = pos - lower;
        let j0 = (lower as usize) % m;
        let j1 = (j0 + 1) % m;
        self.values[j0] * (1.0 - frac) + self.values[j1] * frac
    }

    /// Resamples onto another grid size by interpolation.
    pub fn resample(&self, grid_size: usize) -> Result<Self> {
        if grid_size == self.grid_size {
            return Ok(self.clone());
        }
        Self::from_fn(grid_size, |w| self.interpolate(w))
    }
}

/// Forces exact even symmetry `v[j] == v[M - j]` by averaging mirrored pairs.
fn symmetrize(values: &mut [f64]) {
    let m = values.len();
    for j in 1..m / 2 {
        let avg = 0.5 * (values[j] + values[m - j]);
        values[j] = avg;
        values[m - j] = avg;
    }
}

/// Target process of the adversary: either the load itself or a noisy
/// linear function of it, `Y_k = alpha X_k + Z_k` with `Z_k ~ N(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InferenceModel {
    Identity,
    Linear { alpha: f64 },
}

impl InferenceModel {
    pub fn linear(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidInput(format!(
                "alpha must be finite, got {alpha}"
            )));
        }
        Ok(Self::Linear { alpha })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Identity => Ok(()),
            Self::Linear { alpha } => Self::linear(alpha).map(|_| ()),
        }
    }
}

/// `S(omega_j) = c_0 + 2 sum_{m=1..L} c_m cos(m omega_j)` on an `M`-point grid.
pub fn psd_from_autocorrelation(
    acf: &AutocorrelationSequence,
    grid_size: usize,
) -> Result<SpectralDensity> {
    let needed = 4 * (acf.max_lag() + 1);
    if !grid_size.is_multiple_of(2) || grid_size < needed {
        return Err(Error::BadGrid(format!(
            "grid size must be even and at least {needed}, got {grid_size}"
        )));
    }
    let step = 2.0 * PI / grid_size as f64;
    let half = grid_size / 2;
    let mut values = vec![0.0; grid_size];
    for (j, v) in values.iter_mut().enumerate().take(half + 1) {
        *v = acf.evaluate(-PI + step * j as f64);
    }
    for j in 1..half {
        values[grid_size - j] = values[j];
    }
    SpectralDensity::new(values)
}

fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect()
}

fn demean(series: &[f64]) -> Vec<f64> {
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    series.iter().map(|x| x - mean).collect()
}

fn check_welch(len: usize, segment_length: usize, overlap: f64) -> Result<usize> {
    if segment_length < 4 || !segment_length.is_multiple_of(2) {
        return Err(Error::BadGrid(format!(
            "segment length must be even and at least 4, got {segment_length}"
        )));
    }
    if !(0.0..1.0).contains(&overlap) {
        return Err(Error::InvalidInput(format!(
            "overlap must lie in [0, 1), got {overlap}"
        )));
    }
    if len < 2 * segment_length {
        return Err(Error::TooShort {
            needed: 2 * segment_length,
            got: len,
        });
    }
    let shift = segment_length - (overlap * segment_length as f64).round() as usize;
    Ok(shift.max(1))
}

/// Welch cross-spectral estimate of `x` against `y` on FFT bin order
/// (`k = 0..N`, frequency `2 pi k / N`), normalized so that the auto-spectrum
/// averages to the variance. Both series are demeaned first.
pub(crate) fn welch_cross(
    x: &[f64],
    y: &[f64],
    segment_length: usize,
    overlap: f64,
) -> Result<Vec<Complex<f64>>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let shift = check_welch(x.len(), segment_length, overlap)?;
    let window = hann(segment_length);
    let norm: f64 = window.iter().map(|w| w * w).sum();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(segment_length);
    let (x, y) = (demean(x), demean(y));

    let mut acc = vec![Complex::new(0.0, 0.0); segment_length];
    let mut bx = vec![Complex::new(0.0, 0.0); segment_length];
    let mut by = vec![Complex::new(0.0, 0.0); segment_length];
    let mut segments = 0usize;
    let mut start = 0;
    while start + segment_length <= x.len() {
        for i in 0..segment_length {
            bx[i] = Complex::new(x[start + i] * window[i], 0.0);
            by[i] = Complex::new(y[start + i] * window[i], 0.0);
        }
        fft.process(&mut bx);
        fft.process(&mut by);
        for k in 0..segment_length {
            acc[k] += bx[k] * by[k].conj();
        }
        segments += 1;
        start += shift;
    }
    let scale = 1.0 / (norm * segments as f64);
    Ok(acc.into_iter().map(|c| c * scale).collect())
}

/// Reorders FFT bins onto the `[-pi, pi)` grid: grid index `j` holds bin
/// `(j + M/2) mod M`.
pub(crate) fn bins_to_grid<T: Copy>(bins: &[T]) -> Vec<T> {
    let m = bins.len();
    (0..m).map(|j| bins[(j + m / 2) % m]).collect()
}

/// Welch periodogram (Hann window) of a demeaned series. The grid size of the
/// result equals `segment_length`.
pub fn estimate_psd(
    series: &[f64],
    segment_length: usize,
    overlap: f64,
) -> Result<SpectralDensity> {
    let cross = welch_cross(series, series, segment_length, overlap)?;
    let mut values = bins_to_grid(&cross.iter().map(|c| c.re.max(0.0)).collect::<Vec<_>>());
    symmetrize(&mut values);
    SpectralDensity::new(values)
}

/// Spectra induced on the inference target `Y`: returns `(S_Y, S_XY)`.
pub fn induced_spectra(
    sx: &SpectralDensity,
    model: &InferenceModel,
) -> Result<(SpectralDensity, Vec<f64>)> {
    model.validate()?;
    match *model {
        InferenceModel::Identity => Ok((sx.clone(), sx.values().to_vec())),
        InferenceModel::Linear { alpha } => {
            let sy = sx
                .values()
                .iter()
                .map(|s| alpha * alpha * s + 1.0)
                .collect();
            let sxy = sx.values().iter().map(|s| alpha * s).collect();
            Ok((SpectralDensity::new(sy)?, sxy))
        }
    }
}
