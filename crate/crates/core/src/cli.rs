//! Command-line front end: config files, flag overrides, CSV I/O and the
//! `curve`, `sanitize`, `synth` and `analyze` subcommands.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::channel::{plan_filter, sanitize, Sanitized};
use crate::empirical::{sample_autocorrelation, EmpiricalReport, RunSettings};
use crate::error::Error;
use crate::spectrum::{
    estimate_psd, psd_from_autocorrelation, AutocorrelationSequence, InferenceModel,
    SpectralDensity,
};
use crate::synth::{generate_inference_series, generate_process, SynthesisSpec};
use crate::units::InfoUnit;
use crate::waterfill::{distortion_grid, solve_water_level, tradeoff_curve, DEFAULT_TOL};

pub const CURVE_HEADER: &str = "D,phi,rate_bits,leakage_bits";
pub const DEFAULT_LENGTH: usize = 1 << 17;
pub const DEFAULT_LEAKAGE_GRID: usize = 256;
const ANALYZE_MAX_LAG: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::OutOfRange(_) | Error::BadGrid(_) | Error::BadBlock(_) => {
                CliError::Config(err.to_string())
            }
            _ => CliError::Data(err.to_string()),
        }
    }
}

fn config_err(err: impl std::fmt::Display) -> CliError {
    CliError::Config(err.to_string())
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "spectral-privacy",
    version,
    about = "Rate-distortion-leakage tradeoffs for Gaussian load traces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the tradeoff curve over a distortion grid
    Curve(Flags),
    /// Filter a trace at a target distortion and report what it achieved
    Sanitize(Flags),
    /// Generate a seeded Gaussian trace with the configured autocovariance
    Synth(Flags),
    /// Summarize a trace, optionally against its sanitized version
    Analyze(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TOML config file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Autocovariance lags c_0,c_1,...
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lags: Option<Vec<f64>>,
    /// Input CSV with columns (timestamp?, value)
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Sanitized CSV to compare against (analyze)
    #[arg(long)]
    pub sanitized: Option<PathBuf>,
    /// Linear inference model Y = alpha X + Z
    #[arg(long, allow_hyphen_values = true, conflicts_with = "identity")]
    pub alpha: Option<f64>,
    /// Inference target is the load itself
    #[arg(long)]
    pub identity: bool,
    /// Single target distortion
    #[arg(short = 'd', long)]
    pub distortion: Option<f64>,
    #[arg(long)]
    pub d_min: Option<f64>,
    #[arg(long)]
    pub d_max: Option<f64>,
    #[arg(long)]
    pub d_count: Option<usize>,
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub grid_size: Option<usize>,
    #[arg(long)]
    pub fft_size: Option<usize>,
    /// Welch segment length for the plug-in leakage estimate
    #[arg(long)]
    pub leakage_grid: Option<usize>,
    /// Samples to synthesize
    #[arg(long)]
    pub length: Option<usize>,
    /// Also write an inference column y = alpha x + z (synth)
    #[arg(long, allow_hyphen_values = true)]
    pub inference: Option<f64>,
    /// Report information in nats instead of bits
    #[arg(long)]
    pub nats: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the JSON report
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// On-disk config. Every key is optional; flags fill or override.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub source: SourceSection,
    pub model: ModelSection,
    pub distortion: DistortionSection,
    pub numerics: NumericsSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SourceSection {
    pub lags: Option<Vec<f64>>,
    pub input: Option<PathBuf>,
    pub length: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    /// "identity" or "linear"
    pub inference: Option<String>,
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DistortionSection {
    pub target: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: Option<usize>,
    pub spacing: Option<Spacing>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsSection {
    pub grid_size: Option<usize>,
    pub fft_size: Option<usize>,
    pub leakage_grid: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub units: Option<InfoUnit>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Lags(Vec<f64>),
    Csv(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistortionSpec {
    Single(f64),
    Grid {
        min: f64,
        max: f64,
        count: usize,
        spacing: Spacing,
    },
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: Source,
    pub model: InferenceModel,
    pub distortion: Option<DistortionSpec>,
    pub grid_size: usize,
    pub fft_size: usize,
    pub leakage_grid: usize,
    pub seed: u64,
    pub length: usize,
    pub sanitized: Option<PathBuf>,
    pub inference_alpha: Option<f64>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub unit: InfoUnit,
}

impl ConfigFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Applies command-line flags on top of the file values.
    pub fn merge(mut self, flags: &Flags) -> Self {
        if flags.lags.is_some() || flags.input.is_some() {
            self.source.lags = flags.lags.clone();
            self.source.input = flags.input.clone();
        }
        self.source.length = flags.length.or(self.source.length);
        if flags.identity {
            self.model = ModelSection {
                inference: Some("identity".into()),
                alpha: None,
            };
        } else if let Some(alpha) = flags.alpha {
            self.model = ModelSection {
                inference: Some("linear".into()),
                alpha: Some(alpha),
            };
        }
        if flags.distortion.is_some() {
            self.distortion = DistortionSection {
                target: flags.distortion,
                ..Default::default()
            };
        } else if flags.d_min.is_some() || flags.d_max.is_some() || flags.d_count.is_some() {
            let d = &mut self.distortion;
            d.target = None;
            d.min = flags.d_min.or(d.min);
            d.max = flags.d_max.or(d.max);
            d.count = flags.d_count.or(d.count);
        }
        self.distortion.spacing = flags.spacing.or(self.distortion.spacing);
        let n = &mut self.numerics;
        n.grid_size = flags.grid_size.or(n.grid_size);
        n.fft_size = flags.fft_size.or(n.fft_size);
        n.leakage_grid = flags.leakage_grid.or(n.leakage_grid);
        n.seed = flags.seed.or(n.seed);
        let o = &mut self.output;
        o.path = flags.out.clone().or(o.path.take());
        o.report = flags.report.clone().or(o.report.take());
        if flags.nats {
            o.units = Some(InfoUnit::Nats);
        }
        self
    }

    pub fn resolve(self, flags: &Flags) -> CliResult<RunConfig> {
        let source = match (self.source.lags, self.source.input) {
            (Some(lags), None) => Source::Lags(lags),
            (None, Some(path)) => Source::Csv(path),
            (Some(_), Some(_)) => {
                return Err(config_err("give either lags or an input CSV, not both"))
            }
            (None, None) => return Err(config_err("no source: give lags or an input CSV")),
        };
        let model = match (self.model.inference.as_deref(), self.model.alpha) {
            (None | Some("identity"), None) => InferenceModel::Identity,
            (None | Some("linear"), Some(alpha)) => {
                InferenceModel::linear(alpha).map_err(config_err)?
            }
            (Some("linear"), None) => return Err(config_err("linear model needs alpha")),
            (Some("identity"), Some(_)) => return Err(config_err("identity model takes no alpha")),
            (Some(other), _) => {
                return Err(config_err(format!("unknown inference model {other:?}")))
            }
        };
        let d = self.distortion;
        let distortion = match (d.target, d.min, d.max, d.count) {
            (Some(t), None, None, None) => Some(DistortionSpec::Single(t)),
            (None, Some(min), Some(max), Some(count)) => Some(DistortionSpec::Grid {
                min,
                max,
                count,
                spacing: d.spacing.unwrap_or(Spacing::Log),
            }),
            (None, None, None, None) => None,
            (Some(_), ..) => {
                return Err(config_err(
                    "give either a distortion target or a grid, not both",
                ))
            }
            _ => return Err(config_err("a distortion grid needs min, max and count")),
        };
        Ok(RunConfig {
            source,
            model,
            distortion,
            grid_size: self.numerics.grid_size.unwrap_or(crate::DEFAULT_GRID_SIZE),
            fft_size: self.numerics.fft_size.unwrap_or(crate::DEFAULT_FFT_SIZE),
            leakage_grid: self.numerics.leakage_grid.unwrap_or(DEFAULT_LEAKAGE_GRID),
            seed: self.numerics.seed.unwrap_or(0),
            length: self.source.length.unwrap_or(DEFAULT_LENGTH),
            sanitized: flags.sanitized.clone(),
            inference_alpha: flags.inference,
            out: self.output.path,
            report: self.output.report,
            unit: self.output.units.unwrap_or_default(),
        })
    }
}

impl RunConfig {
    pub fn from_flags(flags: &Flags) -> CliResult<Self> {
        let file = match &flags.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        file.merge(flags).resolve(flags)
    }

    fn settings(&self) -> RunSettings {
        RunSettings {
            seed: self.seed,
            grid_size: self.grid_size,
            fft_size: self.fft_size,
            leakage_grid: self.leakage_grid,
            unit: self.unit,
        }
    }

    /// Distortion values to solve, each checked against `c0`.
    pub fn distortions(&self, c0: f64) -> CliResult<Vec<f64>> {
        let values = match &self.distortion {
            None => return Err(config_err("no distortion target or grid given")),
            Some(DistortionSpec::Single(d)) => vec![*d],
            Some(DistortionSpec::Grid {
                min,
                max,
                count,
                spacing,
            }) => {
                distortion_grid(*min, *max, *count, *spacing == Spacing::Log).map_err(config_err)?
            }
        };
        for d in &values {
            if *d >= c0 {
                return Err(CliError::Config(format!(
                    "distortion {d} exceeds source variance {c0}"
                )));
            }
            if d.is_nan() || *d <= 0.0 {
                return Err(CliError::Config(format!("distortion {d} must be positive")));
            }
        }
        Ok(values)
    }
}

/// A load trace read from CSV. `keys` holds the first column when the file
/// has two columns, with its header name.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub values: Vec<f64>,
    pub keys: Option<(String, Vec<String>)>,
}

/// Reads `(timestamp?, value)` rows. A first row whose value is not numeric
/// is a header; any later non-numeric value is an error naming its row.
pub fn read_series(path: &Path) -> CliResult<Series> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    parse_series(&text).map_err(|e| match e {
        CliError::Data(msg) => CliError::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_series(text: &str) -> CliResult<Series> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    let mut keys: Vec<String> = Vec::new();
    let mut key_name = None;
    let mut width = None;
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| CliError::Data(format!("row {row}: {e}")))?;
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        if record.len() > 2 {
            return Err(CliError::Data(format!(
                "row {row}: expected 1 or 2 columns, got {}",
                record.len()
            )));
        }
        let cols = *width.get_or_insert(record.len());
        if record.len() != cols {
            return Err(CliError::Data(format!(
                "row {row}: expected {cols} columns"
            )));
        }
        let field = &record[cols - 1];
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                values.push(v);
                if cols == 2 {
                    keys.push(record[0].to_string());
                }
            }
            _ if values.is_empty() && key_name.is_none() && row == 1 => {
                key_name = Some(if cols == 2 {
                    record[0].to_string()
                } else {
                    String::new()
                });
            }
            _ => {
                return Err(CliError::Data(format!(
                    "row {row}: non-numeric value {field:?}"
                )))
            }
        }
    }
    if values.is_empty() {
        return Err(CliError::Data("no data rows".into()));
    }
    let keys = (width == Some(2)).then(|| {
        let name = key_name
            .filter(|n| !n.is_empty())
            .unwrap_or_else(|| "timestamp".into());
        (name, keys)
    });
    Ok(Series { values, keys })
}

/// `index,value` (or `<key>,value` when keys are passed through).
pub fn format_series(values: &[f64], keys: Option<&(String, Vec<String>)>) -> String {
    let mut out = String::with_capacity(values.len() * 24);
    match keys {
        Some((name, keys)) => {
            let _ = writeln!(out, "{name},value");
            for (k, v) in keys.iter().zip(values) {
                let _ = writeln!(out, "{k},{v}");
            }
        }
        None => {
            out.push_str("index,value\n");
            for (i, v) in values.iter().enumerate() {
                let _ = writeln!(out, "{i},{v}");
            }
        }
    }
    out
}

fn write_or_print(path: Option<&Path>, content: &str) -> CliResult<()> {
    match path {
        Some(path) => {
            fs::write(path, content).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

/// Source statistics: the trace (if read from CSV) and its spectrum.
struct Loaded {
    series: Option<Series>,
    psd: SpectralDensity,
    acf: Option<AutocorrelationSequence>,
}

fn load_source(cfg: &RunConfig) -> CliResult<Loaded> {
    match &cfg.source {
        Source::Lags(lags) => {
            let acf = AutocorrelationSequence::new(lags.clone()).map_err(config_err)?;
            let psd = psd_from_autocorrelation(&acf, cfg.grid_size).map_err(config_err)?;
            Ok(Loaded {
                series: None,
                psd,
                acf: Some(acf),
            })
        }
        Source::Csv(path) => {
            let series = read_series(path)?;
            // Welch at block resolution, interpolated onto the analysis grid.
            let psd = estimate_psd(&series.values, cfg.fft_size, 0.5)?
                .resample(cfg.grid_size)
                .map_err(config_err)?;
            Ok(Loaded {
                series: Some(series),
                psd,
                acf: None,
            })
        }
    }
}

pub fn format_curve(points: &[crate::waterfill::TradeoffPoint], unit: InfoUnit) -> String {
    let mut out = match unit {
        InfoUnit::Bits => format!("{CURVE_HEADER}\n"),
        InfoUnit::Nats => "D,phi,rate_nats,leakage_nats\n".to_string(),
    };
    for p in points.iter().map(|p| p.in_unit(unit)) {
        let _ = writeln!(out, "{},{},{},{}", p.distortion, p.phi, p.rate, p.leakage);
    }
    out
}

pub fn cmd_curve(cfg: &RunConfig) -> CliResult<()> {
    let loaded = load_source(cfg)?;
    let grid = cfg.distortions(loaded.psd.variance())?;
    let points = tradeoff_curve(&loaded.psd, &cfg.model, &grid)?;
    let json = cfg
        .out
        .as_deref()
        .and_then(Path::extension)
        .is_some_and(|ext| ext.eq_ignore_ascii_case("json"));
    let text = if json {
        let converted: Vec<_> = points.iter().map(|p| p.in_unit(cfg.unit)).collect();
        to_json(&converted)
    } else {
        format_curve(&points, cfg.unit)
    };
    write_or_print(cfg.out.as_deref(), &text)
}

/// Output of `sanitize`: the trace (with keys when passed through) and the report.
pub struct SanitizeOutput {
    pub trace: Sanitized,
    pub keys: Option<(String, Vec<String>)>,
    pub report: EmpiricalReport,
}

pub fn run_sanitize(cfg: &RunConfig) -> CliResult<SanitizeOutput> {
    let loaded = load_source(cfg)?;
    let target = match cfg.distortions(loaded.psd.variance())?.as_slice() {
        [d] => *d,
        _ => return Err(config_err("sanitize needs a single distortion target")),
    };
    let (values, keys) = match (loaded.series, &loaded.acf) {
        (Some(series), _) => (series.values, series.keys),
        (None, Some(acf)) => {
            let spec = SynthesisSpec::new(acf.clone(), cfg.length, cfg.seed)?;
            (generate_process(&spec)?, None)
        }
        (None, None) => unreachable!("sources carry a trace or lags"),
    };
    let phi = solve_water_level(&loaded.psd, target, DEFAULT_TOL)?;
    let plan = plan_filter(&loaded.psd, phi, cfg.fft_size)?;
    let trace = sanitize(&values, &plan, cfg.seed)?;
    let report = EmpiricalReport::evaluate(
        &values,
        &trace,
        &loaded.psd,
        &cfg.model,
        target,
        phi,
        cfg.settings(),
    )?;
    Ok(SanitizeOutput {
        trace,
        keys,
        report,
    })
}

fn default_report_path(out: Option<&Path>) -> Option<PathBuf> {
    out.map(|p| p.with_extension("report.json"))
}

pub fn cmd_sanitize(cfg: &RunConfig) -> CliResult<()> {
    let output = run_sanitize(cfg)?;
    let csv = format_series(&output.trace.samples, output.keys.as_ref());
    let report_path = cfg
        .report
        .clone()
        .or_else(|| default_report_path(cfg.out.as_deref()));
    write_or_print(cfg.out.as_deref(), &csv)?;
    if let Some(path) = report_path {
        write_or_print(Some(&path), &to_json(&output.report))?;
    }
    eprintln!("{}", output.report);
    Ok(())
}

pub fn cmd_synth(cfg: &RunConfig) -> CliResult<()> {
    let spec = match &cfg.source {
        Source::Lags(lags) => {
            let acf = AutocorrelationSequence::new(lags.clone()).map_err(config_err)?;
            SynthesisSpec::new(acf, cfg.length, cfg.seed)
        }
        Source::Csv(_) => {
            let loaded = load_source(cfg)?;
            SynthesisSpec::from_psd(loaded.psd, cfg.length, cfg.seed)
        }
    }
    .map_err(config_err)?;
    let x = generate_process(&spec)?;
    let text = match cfg.inference_alpha {
        None => format_series(&x, None),
        Some(alpha) => {
            let y = generate_inference_series(&x, alpha, cfg.seed).map_err(config_err)?;
            let mut out = String::from("index,value,inference\n");
            for (i, (a, b)) in x.iter().zip(&y).enumerate() {
                let _ = writeln!(out, "{i},{a},{b}");
            }
            out
        }
    };
    write_or_print(cfg.out.as_deref(), &text)
}

/// JSON summary written by `analyze`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSummary {
    pub samples: usize,
    pub mean: f64,
    pub autocovariance: Vec<f64>,
    pub comparison: Option<EmpiricalReport>,
}

pub fn run_analyze(cfg: &RunConfig) -> CliResult<AnalysisSummary> {
    let loaded = load_source(cfg)?;
    let series = loaded
        .series
        .ok_or_else(|| config_err("analyze needs an input CSV"))?;
    let x = &series.values;
    let max_lag = ANALYZE_MAX_LAG.min(x.len() / 10);
    let acf = sample_autocorrelation(x, max_lag)?;
    let comparison = match &cfg.sanitized {
        None => None,
        Some(path) => {
            let other = read_series(path)?;
            if other.values.len() != x.len() {
                return Err(CliError::Data(format!(
                    "{}: {} samples but the input has {}",
                    path.display(),
                    other.values.len(),
                    x.len()
                )));
            }
            let trace = Sanitized {
                samples: other.values,
                warmup: cfg.fft_size / 2,
            };
            let steady = trace.steady_state();
            let mse =
                crate::channel::measure_distortion(&x[steady.clone()], &trace.samples[steady])?;
            let target = match &cfg.distortion {
                Some(DistortionSpec::Single(d)) => *d,
                Some(_) => return Err(config_err("analyze takes a single distortion target")),
                None => mse,
            };
            let phi = solve_water_level(&loaded.psd, target, DEFAULT_TOL)?;
            Some(EmpiricalReport::evaluate(
                x,
                &trace,
                &loaded.psd,
                &cfg.model,
                target,
                phi,
                cfg.settings(),
            )?)
        }
    };
    Ok(AnalysisSummary {
        samples: x.len(),
        mean: x.iter().sum::<f64>() / x.len() as f64,
        autocovariance: acf.lags().to_vec(),
        comparison,
    })
}

pub fn cmd_analyze(cfg: &RunConfig) -> CliResult<()> {
    let summary = run_analyze(cfg)?;
    let mut table = String::new();
    let _ = writeln!(table, "{:<24} {:>14}", "samples", summary.samples);
    let _ = writeln!(table, "{:<24} {:>14.6}", "mean", summary.mean);
    for (m, c) in summary.autocovariance.iter().enumerate() {
        let _ = writeln!(
            table,
            "{:<24} {:>14.6}",
            format!("autocovariance lag {m}"),
            c
        );
    }
    if let Some(report) = &summary.comparison {
        let _ = writeln!(table, "{report}");
    }
    print!("{table}");
    if let Some(path) = &cfg.report {
        write_or_print(Some(path), &to_json(&summary))?;
    }
    Ok(())
}

pub fn execute(command: &Command) -> CliResult<()> {
    match command {
        Command::Curve(flags) => cmd_curve(&RunConfig::from_flags(flags)?),
        Command::Sanitize(flags) => cmd_sanitize(&RunConfig::from_flags(flags)?),
        Command::Synth(flags) => cmd_synth(&RunConfig::from_flags(flags)?),
        Command::Analyze(flags) => cmd_analyze(&RunConfig::from_flags(flags)?),
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
