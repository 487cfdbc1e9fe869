//! Experiment configuration: JSON in, validated struct out. Unknown keys are
//! rejected, constraint violations name the offending field.

use crate::bands::Band;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BandChoice {
    #[serde(rename = "all")]
    All,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
}

impl BandChoice {
    pub fn to_band(self) -> Band {
        match self {
            BandChoice::All => Band::All,
            BandChoice::One => Band::One,
            BandChoice::Two => Band::Two,
            BandChoice::Three => Band::Three,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "N", default = "default_points")]
    pub points_per_axis: usize,
    #[serde(rename = "L", default = "default_half_width")]
    pub half_width: f64,
}

fn default_points() -> usize {
    4096
}
fn default_half_width() -> f64 {
    200.0
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { points_per_axis: default_points(), half_width: default_half_width() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
}

fn default_t_max() -> f64 {
    100.0
}
fn default_samples() -> usize {
    48
}
fn default_spacing() -> Spacing {
    Spacing::Log
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self { t_max: default_t_max(), samples: default_samples(), spacing: default_spacing() }
    }
}

impl TimeConfig {
    /// The sampled time grid: log-spaced on [1, t_max], or linear on
    /// [t_max/samples, t_max] (both strictly positive so norms stay fittable).
    pub fn sample_times(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Log => crate::oracle::log_grid(1.0, self.t_max, self.samples),
            Spacing::Linear => (1..=self.samples)
                .map(|i| self.t_max * i as f64 / self.samples as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    Gaussian,
    GaussianDerivative,
    SumOfGaussians,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataWhich {
    U0,
    U1,
    Both,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    #[serde(default = "default_kind")]
    pub kind: DataKind,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default)]
    pub center: f64,
    #[serde(default = "default_which")]
    pub which: DataWhich,
}

fn default_kind() -> DataKind {
    DataKind::Gaussian
}
fn default_width() -> f64 {
    1.0
}
fn default_which() -> DataWhich {
    DataWhich::Both
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            kind: default_kind(),
            width: default_width(),
            center: 0.0,
            which: default_which(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    #[serde(default = "default_window_fraction")]
    pub window_fraction: f64,
    #[serde(default = "default_growth_tol")]
    pub growth_tol: f64,
    #[serde(default = "default_min_decay_rate")]
    pub min_decay_rate: f64,
}

fn default_window_fraction() -> f64 {
    0.5
}
fn default_growth_tol() -> f64 {
    0.15
}
fn default_min_decay_rate() -> f64 {
    0.05
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            window_fraction: default_window_fraction(),
            growth_tol: default_growth_tol(),
            min_decay_rate: default_min_decay_rate(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output directory; the CLI --out flag overrides this.
    #[serde(default)]
    pub dir: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub sigma: f64,
    pub dim: usize,
    #[serde(default = "default_a_list")]
    pub a_list: Vec<f64>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub times: TimeConfig,
    #[serde(default)]
    pub data: DataConfig,
    #[serde(default = "default_bands")]
    pub bands: Vec<BandChoice>,
    #[serde(default)]
    pub fits: FitConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_a_list() -> Vec<f64> {
    vec![0.0]
}

fn default_bands() -> Vec<BandChoice> {
    vec![BandChoice::All, BandChoice::One, BandChoice::Two, BandChoice::Three]
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 1.0) {
            return Err(Error::Config(format!("sigma must exceed 1, got {}", self.sigma)));
        }
        if !(1..=3).contains(&self.dim) {
            return Err(Error::Config(format!("dim must be 1, 2 or 3, got {}", self.dim)));
        }
        if self.a_list.is_empty() {
            return Err(Error::Config("a_list must not be empty".into()));
        }
        for a in &self.a_list {
            if !(*a >= 0.0) {
                return Err(Error::Config(format!("a_list entries must be >= 0, got {a}")));
            }
        }
        let g = &self.grid;
        if g.points_per_axis < 16 || !g.points_per_axis.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid.N must be a power of two >= 16, got {}",
                g.points_per_axis
            )));
        }
        if !(g.half_width > 0.0) {
            return Err(Error::Config(format!("grid.L must be positive, got {}", g.half_width)));
        }
        if !(self.times.t_max > 1.0) {
            return Err(Error::Config(format!(
                "times.t_max must exceed 1, got {}",
                self.times.t_max
            )));
        }
        if self.times.samples < 2 {
            return Err(Error::Config(format!(
                "times.samples must be >= 2, got {}",
                self.times.samples
            )));
        }
        if !(self.data.width > 0.0) {
            return Err(Error::Config(format!(
                "data.width must be positive, got {}",
                self.data.width
            )));
        }
        if self.bands.is_empty() {
            return Err(Error::Config("bands must not be empty".into()));
        }
        let f = &self.fits;
        if !(f.window_fraction > 0.0 && f.window_fraction < 1.0) {
            return Err(Error::Config(format!(
                "fits.window_fraction must lie in (0, 1), got {}",
                f.window_fraction
            )));
        }
        if !(f.growth_tol >= 0.0) {
            return Err(Error::Config(format!(
                "fits.growth_tol must be >= 0, got {}",
                f.growth_tol
            )));
        }
        if !(f.min_decay_rate >= 0.0) {
            return Err(Error::Config(format!(
                "fits.min_decay_rate must be >= 0, got {}",
                f.min_decay_rate
            )));
        }
        Ok(())
    }
}

/// Read and validate a JSON config file. Unknown keys are rejected with the
/// serde field path; constraint violations name the field.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn parse_str(s: &str) -> Result<ExperimentConfig> {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(s.as_bytes()).unwrap();
        parse_config(f.path())
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg = parse_str(r#"{"sigma": 2, "dim": 1}"#).unwrap();
        assert_eq!(cfg.grid.points_per_axis, 4096);
        assert_eq!(cfg.grid.half_width, 200.0);
        assert_eq!(cfg.times.t_max, 100.0);
        assert_eq!(cfg.times.samples, 48);
        assert_eq!(cfg.times.spacing, Spacing::Log);
        assert_eq!(cfg.fits.window_fraction, 0.5);
        assert_eq!(cfg.bands.len(), 4);
    }

    #[test]
    fn sigma_one_rejected() {
        let err = parse_str(r#"{"sigma": 1.0, "dim": 1}"#).unwrap_err();
        assert!(err.to_string().contains("sigma must exceed 1"), "{err}");
    }

    #[test]
    fn non_power_of_two_rejected() {
        let err = parse_str(r#"{"sigma": 2, "dim": 1, "grid": {"N": 1000}}"#).unwrap_err();
        assert!(err.to_string().contains("power of two"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = parse_str(r#"{"sigma": 2, "dim": 1, "bogus": 3}"#).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let err2 =
            parse_str(r#"{"sigma": 2, "dim": 1, "times": {"t_max": 10, "step": 1}}"#).unwrap_err();
        assert!(err2.to_string().contains("step"), "{err2}");
    }

    #[test]
    fn band_names_parse() {
        let cfg = parse_str(r#"{"sigma": 2, "dim": 1, "bands": ["all", "2"]}"#).unwrap();
        assert_eq!(cfg.bands, vec![BandChoice::All, BandChoice::Two]);
    }

    #[test]
    fn time_grids() {
        let t = TimeConfig { t_max: 10.0, samples: 5, spacing: Spacing::Linear };
        assert_eq!(t.sample_times(), vec![2.0, 4.0, 6.0, 8.0, 10.0]);
        let t2 = TimeConfig { t_max: 100.0, samples: 3, spacing: Spacing::Log };
        let got = t2.sample_times();
        assert!((got[0] - 1.0).abs() < 1e-12);
        assert!((got[1] - 10.0).abs() < 1e-9);
        assert!((got[2] - 100.0).abs() < 1e-9);
    }
}
