//! Reverse waterfilling over a power spectral density.
//!
//! A water level `phi` fixes the distortion `D(phi) = mean(min(S, phi))`,
//! the rate `R(phi) = mean(max(0, log2(S / phi) / 2))` and the leakage of
//! the rate-distortion optimal test channel about the inference target.
//! Rates and leakages are in bits per sample.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{InferenceModel, SpectralDensity};
use crate::units::InfoUnit;

/// Default absolute tolerance on `D` for [`solve_water_level`].
pub const DEFAULT_TOL: f64 = 1e-10;
const MAX_BISECTIONS: usize = 200;

/// One solved operating point on the tradeoff curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub phi: f64,
    pub distortion: f64,
    pub rate: f64,
    pub leakage: f64,
}

impl TradeoffPoint {
    /// Same point with rate and leakage expressed in `unit` (stored in bits).
    pub fn in_unit(self, unit: InfoUnit) -> Self {
        Self {
            rate: unit.from_bits(self.rate),
            leakage: unit.from_bits(self.leakage),
            ..self
        }
    }
}

pub fn distortion_of_level(s: &SpectralDensity, phi: f64) -> f64 {
    let phi = phi.max(0.0);
    s.integrate(|v| v.min(phi))
}

/// Bisection for `D(phi) = target` on `[0, max S]`. `D(phi)` is continuous and
/// nondecreasing, so the bracket always holds the root.
pub fn solve_water_level(s: &SpectralDensity, target: f64, tol: f64) -> Result<f64> {
    let c0 = s.variance();
    if !(target > 0.0 && target < c0) {
        return Err(Error::OutOfRange(format!(
            "distortion {target} must lie strictly between 0 and the source variance {c0}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let (mut lo, mut hi) = (0.0, s.max() * (1.0 + 1e-12) + f64::MIN_POSITIVE);
    let mut mid = 0.5 * (lo + hi);
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_BISECTIONS {
        mid = 0.5 * (lo + hi);
        residual = distortion_of_level(s, mid) - target;
        if residual.abs() <= tol {
            return Ok(mid);
        }
        if residual < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Bracket collapsed below float resolution; accept if close enough.
    if residual.abs() <= tol {
        Ok(mid)
    } else {
        Err(Error::NotConverged {
            tol,
            residual: residual.abs(),
        })
    }
}

/// Per-bin rate `max(0, log2(S/phi)/2)`; zero-power bins contribute nothing.
fn bin_rate(s: f64, phi: f64) -> f64 {
    if s <= phi || s <= 0.0 {
        0.0
    } else {
        0.5 * (s / phi).log2()
    }
}

pub fn rate_of_level(s: &SpectralDensity, phi: f64) -> f64 {
    s.integrate(|v| bin_rate(v, phi))
}

/// Leakage about the inference target through the rate-distortion optimal
/// Gaussian test channel at level `phi`.
///
/// For `Y = alpha X + Z` the per-bin term is
/// `log2((alpha^2 S + 1) / (alpha^2 min(S, phi) + 1)) / 2`: the channel reveals
/// power `S - phi` with cross-spectrum `alpha (S - phi)` where `S > phi` and
/// nothing elsewhere. When `Y = X` the leakage is the rate itself.
pub fn leakage_of_level(sx: &SpectralDensity, model: &InferenceModel, phi: f64) -> f64 {
    match *model {
        InferenceModel::Identity => rate_of_level(sx, phi),
        InferenceModel::Linear { alpha } => {
            let a2 = alpha * alpha;
            sx.integrate(|v| {
                if v <= phi {
                    0.0
                } else {
                    0.5 * ((a2 * v + 1.0) / (a2 * phi + 1.0)).log2()
                }
            })
        }
    }
}

/// Solves one point at distortion `target`.
pub fn tradeoff_point(
    s: &SpectralDensity,
    model: &InferenceModel,
    target: f64,
    tol: f64,
) -> Result<TradeoffPoint> {
    let phi = solve_water_level(s, target, tol)?;
    Ok(TradeoffPoint {
        phi,
        distortion: distortion_of_level(s, phi),
        rate: rate_of_level(s, phi),
        leakage: leakage_of_level(s, model, phi),
    })
}

/// Solves every distortion in `grid` (strictly increasing, inside `(0, c_0)`).
/// Points are independent, so they are computed in parallel.
pub fn tradeoff_curve(
    s: &SpectralDensity,
    model: &InferenceModel,
    grid: &[f64],
) -> Result<Vec<TradeoffPoint>> {
    model.validate()?;
    if let Some(w) = grid
        .windows(2)
        .find(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::InvalidInput(format!(
            "distortion grid must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    grid.par_iter()
        .map(|&d| tradeoff_point(s, model, d, DEFAULT_TOL))
        .collect()
}

/// `count` points from `min` to `max` inclusive, linearly or log spaced.
pub fn distortion_grid(min: f64, max: f64, count: usize, log: bool) -> Result<Vec<f64>> {
    let ordered = min > 0.0 && max >= min && max.is_finite();
    if count == 0 || !ordered {
        return Err(Error::InvalidInput(format!(
            "bad distortion grid: min {min}, max {max}, count {count}"
        )));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let t = i as f64 / last;
            if log {
                (min.ln() + t * (max.ln() - min.ln())).exp()
            } else {
                min + t * (max - min)
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{psd_from_autocorrelation, AutocorrelationSequence};

    fn paper_psd() -> SpectralDensity {
        let acf = AutocorrelationSequence::new(vec![1.0, 0.3, 0.4]).unwrap();
        psd_from_autocorrelation(&acf, 4096).unwrap()
    }

    #[test]
    fn distortion_endpoints() {
        let s = paper_psd();
        assert_eq!(distortion_of_level(&s, 0.0), 0.0);
        assert!((distortion_of_level(&s, 2.4) - 1.0).abs() < 1e-12);
        assert!((distortion_of_level(&s, 10.0) - 1.0).abs() < 1e-12);
        assert!((distortion_of_level(&s, 0.1) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn water_level_low_regime_and_flat() {
        let s = paper_psd();
        let phi = solve_water_level(&s, 0.1, DEFAULT_TOL).unwrap();
        assert!((phi - 0.1).abs() < 1e-8);
        let flat = SpectralDensity::flat(1.0, 64).unwrap();
        let phi = solve_water_level(&flat, 0.25, DEFAULT_TOL).unwrap();
        assert!((phi - 0.25).abs() < 1e-10);
    }

    #[test]
    fn water_level_out_of_range() {
        let s = paper_psd();
        for d in [0.0, -0.1, 1.0, 1.5, f64::NAN] {
            assert!(matches!(
                solve_water_level(&s, d, DEFAULT_TOL),
                Err(Error::OutOfRange(_))
            ));
        }
    }

    #[test]
    fn rate_cases() {
        let s = paper_psd();
        assert_eq!(rate_of_level(&s, 2.4), 0.0);
        assert_eq!(rate_of_level(&s, 3.0), 0.0);
        let flat = SpectralDensity::flat(2.0, 64).unwrap();
        let r = rate_of_level(&flat, 0.5);
        assert!((r - 0.5 * (2.0f64 / 0.5).log2()).abs() < 1e-15);
    }

    #[test]
    fn tie_at_water_level_contributes_nothing() {
        let flat = SpectralDensity::flat(0.7, 16).unwrap();
        assert_eq!(rate_of_level(&flat, 0.7), 0.0);
        assert_eq!(
            leakage_of_level(&flat, &InferenceModel::Linear { alpha: 3.0 }, 0.7),
            0.0
        );
        assert!((distortion_of_level(&flat, 0.7) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn zero_bins_contribute_nothing() {
        let s = SpectralDensity::new(vec![0.0, 1.0, 4.0, 1.0]).unwrap();
        let r = rate_of_level(&s, 1.0);
        assert!(r.is_finite());
        assert!((r - 0.25).abs() < 1e-15);
        assert!(leakage_of_level(&s, &InferenceModel::Identity, 1e-3).is_finite());
    }

    #[test]
    fn leakage_zero_alpha_and_identity() {
        let s = paper_psd();
        for phi in [0.05, 0.1, 0.5, 2.0] {
            assert_eq!(
                leakage_of_level(&s, &InferenceModel::Linear { alpha: 0.0 }, phi),
                0.0
            );
            assert_eq!(
                leakage_of_level(&s, &InferenceModel::Identity, phi),
                rate_of_level(&s, phi)
            );
        }
    }

    #[test]
    fn curve_validation() {
        let s = paper_psd();
        let m = InferenceModel::Identity;
        assert!(tradeoff_curve(&s, &m, &[0.2, 0.1]).is_err());
        assert!(tradeoff_curve(&s, &m, &[0.2, 0.2]).is_err());
        assert!(matches!(
            tradeoff_curve(&s, &m, &[0.5, 1.5]),
            Err(Error::OutOfRange(_))
        ));
        let pts = tradeoff_curve(&s, &m, &[0.05, 0.1]).unwrap();
        assert!((pts[0].phi - 0.05).abs() < 1e-8);
        assert!((pts[1].phi - 0.1).abs() < 1e-8);
        let pts = tradeoff_curve(&s, &m, &[1.0 - 1e-6]).unwrap();
        assert!(pts[0].rate <= 1e-3);
    }

    #[test]
    fn grid_spacing() {
        let g = distortion_grid(0.01, 0.99, 50, true).unwrap();
        assert_eq!(g.len(), 50);
        assert!((g[0] - 0.01).abs() < 1e-15 && (g[49] - 0.99).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let g = distortion_grid(0.1, 0.5, 5, false).unwrap();
        assert!((g[2] - 0.3).abs() < 1e-15);
        assert!(distortion_grid(0.0, 0.5, 5, true).is_err());
    }

    #[test]
    fn nats_conversion() {
        let p = TradeoffPoint {
            phi: 0.1,
            distortion: 0.1,
            rate: 1.0,
            leakage: 2.0,
        };
        let q = p.in_unit(InfoUnit::Nats);
        assert!((q.rate - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(q.phi, 0.1);
    }
}
