//! Rate-distortion-leakage analysis for stationary Gaussian load traces.
//!
//! The pipeline is: describe a load process by its autocovariance
//! ([`spectrum`]), solve the reverse-waterfilling problem for a target
//! distortion ([`waterfill`]), realize the optimal test channel as a block
//! spectral filter ([`channel`]), and check the achieved distortion and
//! leakage on data ([`synth`], [`empirical`]).

pub mod channel;
pub mod cli;
pub mod empirical;
pub mod error;
pub mod spectrum;
pub mod synth;
pub mod units;
pub mod waterfill;

pub use channel::{measure_distortion, plan_filter, sanitize, FilterPlan, Sanitized};
pub use empirical::{plugin_leakage, sample_autocorrelation, EmpiricalReport, LeakageEstimate};
pub use error::{Error, Result};
pub use spectrum::{
    estimate_psd, induced_spectra, psd_from_autocorrelation, AutocorrelationSequence,
    InferenceModel, SpectralDensity,
};
pub use synth::{generate_inference_series, generate_process, SynthesisSpec};
pub use units::InfoUnit;
pub use waterfill::{
    distortion_of_level, leakage_of_level, rate_of_level, solve_water_level, tradeoff_curve,
    TradeoffPoint,
};

/// Default number of points on the frequency grid over [-pi, pi).
pub const DEFAULT_GRID_SIZE: usize = 4096;
/// Default block length for the sanitizing filter.
pub const DEFAULT_FFT_SIZE: usize = 1024;
