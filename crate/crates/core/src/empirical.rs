//! Estimates of achieved distortion and leakage from data.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channel::{measure_distortion, Sanitized};
use crate::error::{Error, Result};
use crate::spectrum::{welch_cross, AutocorrelationSequence, InferenceModel, SpectralDensity};
use crate::units::InfoUnit;
use crate::waterfill::{leakage_of_level, rate_of_level};

/// Shortest pair accepted by [`plugin_leakage`].
pub const MIN_PLUGIN_LENGTH: usize = 1 << 14;
/// Relative floor (times the variance of `x`) below which spectra count as zero.
pub const EPS_FLOOR: f64 = 1e-9;
const WELCH_OVERLAP: f64 = 0.5;

/// Biased (divide-by-n) sample autocovariance after mean removal, which is
/// always a nonnegative definite sequence.
pub fn sample_autocorrelation(series: &[f64], max_lag: usize) -> Result<AutocorrelationSequence> {
    let n = series.len();
    if n == 0 || max_lag > n / 10 {
        return Err(Error::TooShort {
            needed: (10 * max_lag).max(1),
            got: n,
        });
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let lags: Vec<f64> = (0..=max_lag)
        .map(|m| {
            centered[..n - m]
                .iter()
                .zip(&centered[m..])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / n as f64
        })
        .collect();
    if lags[0] <= 0.0 {
        return Ok(AutocorrelationSequence::degenerate(vec![0.0; max_lag + 1]));
    }
    AutocorrelationSequence::new(lags)
}

/// Plug-in leakage estimate in bits per sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeakageEstimate {
    pub bits: f64,
    /// Some bin had a (numerically) noiseless relation between the target
    /// and the revealed trace; its term was capped at the floor.
    pub lossless: bool,
}

/// Gaussian plug-in estimate of the leakage about the inference target from
/// the revealed trace `x_hat`: Welch spectra of `x`, `x_hat` and their
/// cross-spectrum, mapped through the model, then
/// `mean(log2(S_Y / (S_Y - |S_YXh|^2 / S_Xh)) / 2)` over the grid.
pub fn plugin_leakage(
    x: &[f64],
    x_hat: &[f64],
    model: &InferenceModel,
    grid_size: usize,
) -> Result<LeakageEstimate> {
    model.validate()?;
    if x.len() != x_hat.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: x_hat.len(),
        });
    }
    if x.len() < MIN_PLUGIN_LENGTH {
        return Err(Error::TooShort {
            needed: MIN_PLUGIN_LENGTH,
            got: x.len(),
        });
    }
    let sxx = welch_cross(x, x, grid_size, WELCH_OVERLAP)?;
    let shh = welch_cross(x_hat, x_hat, grid_size, WELCH_OVERLAP)?;
    let sxh = welch_cross(x, x_hat, grid_size, WELCH_OVERLAP)?;

    let c0 = sxx.iter().map(|c| c.re).sum::<f64>() / grid_size as f64;
    let floor = EPS_FLOOR * c0;
    let (gain, offset) = match *model {
        InferenceModel::Identity => (1.0, 0.0),
        InferenceModel::Linear { alpha } => (alpha, 1.0),
    };
    let mut lossless = false;
    let mut total = 0.0;
    for k in 0..grid_size {
        let revealed = shh[k].re;
        if floor <= 0.0 || revealed < floor {
            continue;
        }
        let sy = gain * gain * sxx[k].re + offset;
        let cross = (sxh[k] * gain).norm_sqr();
        let mut residual = sy - cross / revealed;
        if residual < floor {
            residual = floor;
            lossless = true;
        }
        total += (0.5 * (sy / residual).log2()).max(0.0);
    }
    Ok(LeakageEstimate {
        bits: total / grid_size as f64,
        lossless,
    })
}

/// Numerical settings echoed into a report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub seed: u64,
    pub grid_size: usize,
    pub fft_size: usize,
    pub leakage_grid: usize,
    pub unit: InfoUnit,
}

/// Analytic predictions next to what a sanitized trace achieved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalReport {
    pub target_distortion: f64,
    pub phi: f64,
    pub measured_mse: f64,
    pub analytic_rate: f64,
    pub analytic_leakage: f64,
    pub plugin_leakage: f64,
    pub lossless: bool,
    pub samples_total: usize,
    pub samples_measured: usize,
    pub model: InferenceModel,
    #[serde(flatten)]
    pub settings: RunSettings,
}

impl EmpiricalReport {
    /// Measures `sanitized` against `original` on the steady-state region and
    /// pairs it with the analytic values at water level `phi`.
    pub fn evaluate(
        original: &[f64],
        sanitized: &Sanitized,
        psd: &SpectralDensity,
        model: &InferenceModel,
        target_distortion: f64,
        phi: f64,
        settings: RunSettings,
    ) -> Result<Self> {
        if original.len() != sanitized.samples.len() {
            return Err(Error::LengthMismatch {
                left: original.len(),
                right: sanitized.samples.len(),
            });
        }
        let steady = sanitized.steady_state();
        let x = &original[steady.clone()];
        let x_hat = &sanitized.samples[steady];
        let measured_mse = measure_distortion(x, x_hat)?;
        let plugin = plugin_leakage(x, x_hat, model, settings.leakage_grid)?;
        let unit = settings.unit;
        Ok(Self {
            target_distortion,
            phi,
            measured_mse,
            analytic_rate: unit.from_bits(rate_of_level(psd, phi)),
            analytic_leakage: unit.from_bits(leakage_of_level(psd, model, phi)),
            plugin_leakage: unit.from_bits(plugin.bits),
            lossless: plugin.lossless,
            samples_total: original.len(),
            samples_measured: x.len(),
            model: *model,
            settings,
        })
    }
}

impl fmt::Display for EmpiricalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = self.settings.unit.suffix();
        let rel = if self.target_distortion > 0.0 {
            100.0 * (self.measured_mse - self.target_distortion) / self.target_distortion
        } else {
            f64::NAN
        };
        writeln!(f, "{:<24} {:>14}", "quantity", "value")?;
        writeln!(
            f,
            "{:<24} {:>14.6}",
            "target distortion", self.target_distortion
        )?;
        writeln!(f, "{:<24} {:>14.6}", "water level", self.phi)?;
        writeln!(
            f,
            "{:<24} {:>14.6} ({rel:+.2}%)",
            "measured mse", self.measured_mse
        )?;
        writeln!(
            f,
            "{:<24} {:>14.6}",
            format!("analytic rate [{unit}]"),
            self.analytic_rate
        )?;
        writeln!(
            f,
            "{:<24} {:>14.6}",
            format!("analytic leakage [{unit}]"),
            self.analytic_leakage
        )?;
        writeln!(
            f,
            "{:<24} {:>14.6}{}",
            format!("plug-in leakage [{unit}]"),
            self.plugin_leakage,
            if self.lossless {
                " (capped: lossless)"
            } else {
                ""
            }
        )?;
        write!(
            f,
            "{:<24} {:>14}",
            "samples (measured/all)",
            format!("{}/{}", self.samples_measured, self.samples_total)
        )
    }
}
