//! JSON run configuration: schema-checked parsing, defaults, validation.
//!
//! One document drives every subcommand; unknown keys are rejected. Angles
//! are degrees and SNRs are dB at this boundary; conversions to radians and
//! linear happen inside the library.

use serde::{Deserialize, Serialize};

use sector_music::array::{ArrayGeometry, DEFAULT_BEAMWIDTH_CONSTANT};
use sector_music::harness::{
    McConfig, ScenarioTemplate, BENCHMARK_KERNEL_BANDWIDTH,
};
use sector_music::signal::{SignalModel, Space};

use crate::CliError;

fn default_spacing() -> f64 {
    0.5
}
fn default_noise() -> f64 {
    1.0
}
fn default_bandwidth() -> f64 {
    BENCHMARK_KERNEL_BANDWIDTH
}
fn default_subspace() -> usize {
    3
}
fn default_trials() -> usize {
    30
}
fn default_step() -> f64 {
    1.0
}
fn default_beamwidth_constant() -> f64 {
    DEFAULT_BEAMWIDTH_CONSTANT
}
fn default_window() -> f64 {
    1.0
}
fn default_half_span() -> f64 {
    2.0
}
fn default_space() -> String {
    "beamspace".into()
}
fn default_signal_model() -> String {
    "gaussian".into()
}

/// The resolved run configuration, echoed verbatim into the manifest.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Sensor count.
    #[serde(rename = "N")]
    pub num_sensors: usize,
    /// Source DOAs in degrees (two for threshold experiments).
    #[serde(default)]
    pub alphas: Vec<f64>,
    /// Snapshot count.
    #[serde(rename = "K", default)]
    pub num_snapshots: usize,
    /// Element spacing over wavelength.
    #[serde(default = "default_spacing")]
    pub spacing_ratio: f64,
    /// Noise power (sigma^2).
    #[serde(default = "default_noise")]
    pub noise_power: f64,
    /// Concentration-kernel bandwidth of the prefilter bank.
    #[serde(rename = "B", default = "default_bandwidth")]
    pub kernel_bandwidth: f64,
    /// Number of prolate sequences (beamspace dimension).
    #[serde(rename = "n", default = "default_subspace")]
    pub subspace_dim: usize,
    /// Sector center in degrees; null centers on the DOA midpoint.
    #[serde(default)]
    pub sector_center_deg: Option<f64>,
    #[serde(default = "default_space")]
    pub space: String,
    /// Array SNR operating point for single-run commands (dB).
    #[serde(default)]
    pub asnr_db: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_step")]
    pub snr_step_db: f64,
    #[serde(default)]
    pub snr_start_db: Option<f64>,
    #[serde(default)]
    pub snr_stop_db: Option<f64>,
    #[serde(default = "default_beamwidth_constant")]
    pub beamwidth_constant: f64,
    /// Full width of the resolution window in beamwidths.
    #[serde(default = "default_window")]
    pub resolution_window_beamwidths: f64,
    /// Spectrum-grid half span around the midpoint, in beamwidths.
    #[serde(default = "default_half_span")]
    pub grid_half_span_beamwidths: f64,
    /// Spectrum/gain grid step in degrees; null uses beamwidth/200.
    #[serde(default)]
    pub grid_step_deg: Option<f64>,
    #[serde(default = "default_signal_model")]
    pub signal_model: String,
    /// Separation grid for sweep/figures commands (degrees).
    #[serde(default)]
    pub alpha_d_start_deg: Option<f64>,
    #[serde(default)]
    pub alpha_d_stop_deg: Option<f64>,
    #[serde(default)]
    pub alpha_d_step_deg: Option<f64>,
    /// Snapshot counts for figure curves.
    #[serde(default)]
    pub k_values: Vec<usize>,
    /// Subspace dimensions for figure curves.
    #[serde(default)]
    pub n_values: Vec<usize>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: RunConfig = serde_json::from_str(text)
            .map_err(|e| CliError::validation(format!("config schema violation: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.num_sensors < 2 {
            return Err(CliError::validation("N >= 2 required"));
        }
        if self.num_snapshots == 0 {
            return Err(CliError::validation("K >= 1 required"));
        }
        if !(self.spacing_ratio > 0.0) {
            return Err(CliError::validation("spacing_ratio > 0 required"));
        }
        if !(self.noise_power > 0.0) {
            return Err(CliError::validation("noise_power > 0 required"));
        }
        if !(self.kernel_bandwidth > 0.0 && self.kernel_bandwidth < 0.5) {
            return Err(CliError::validation("B must lie in (0, 0.5)"));
        }
        if self.subspace_dim == 0 || self.subspace_dim > self.num_sensors {
            return Err(CliError::validation("n must satisfy 1 <= n <= N"));
        }
        if self.trials == 0 {
            return Err(CliError::validation("trials >= 1 required"));
        }
        if !(self.snr_step_db > 0.0) {
            return Err(CliError::validation("snr_step_db > 0 required"));
        }
        if self.alphas.iter().any(|a| a.abs() >= 90.0) {
            return Err(CliError::validation(
                "alphas must lie strictly inside (-90, 90) degrees",
            ));
        }
        if !(self.resolution_window_beamwidths > 0.0) {
            return Err(CliError::validation(
                "resolution_window_beamwidths > 0 required",
            ));
        }
        self.parse_space()?;
        self.parse_signal_model()?;
        Ok(())
    }

    pub fn parse_space(&self) -> Result<Space, CliError> {
        match self.space.as_str() {
            "element" => Ok(Space::Element),
            "beamspace" => Ok(Space::Beamspace),
            other => Err(CliError::validation(format!(
                "space must be \"element\" or \"beamspace\", got \"{other}\""
            ))),
        }
    }

    pub fn parse_signal_model(&self) -> Result<SignalModel, CliError> {
        match self.signal_model.as_str() {
            "gaussian" => Ok(SignalModel::Gaussian),
            "constant_modulus" => Ok(SignalModel::ConstantModulus),
            other => Err(CliError::validation(format!(
                "signal_model must be \"gaussian\" or \"constant_modulus\", got \"{other}\""
            ))),
        }
    }

    pub fn geometry(&self) -> Result<ArrayGeometry, CliError> {
        ArrayGeometry::new(self.num_sensors, self.spacing_ratio).map_err(CliError::from)
    }

    pub fn two_alphas(&self) -> Result<[f64; 2], CliError> {
        match self.alphas.as_slice() {
            [a, b] => Ok([*a, *b]),
            other => Err(CliError::validation(format!(
                "exactly two source angles required, got {}",
                other.len()
            ))),
        }
    }

    /// Assemble the Monte Carlo configuration for sweep-style commands.
    pub fn mc_config(&self) -> Result<McConfig, CliError> {
        let geometry = self.geometry()?;
        let alphas = self.two_alphas()?;
        let template = ScenarioTemplate {
            geometry,
            source_angles_deg: alphas,
            noise_power: self.noise_power,
            num_snapshots: self.num_snapshots,
        };
        let mut mc = McConfig::new(template, self.seed);
        mc.kernel_bandwidth = self.kernel_bandwidth;
        mc.subspace_dim = self.subspace_dim;
        mc.sector_center_deg = self.sector_center_deg;
        mc.space = self.parse_space()?;
        mc.snr_start_db = self.snr_start_db;
        mc.snr_stop_db = self.snr_stop_db;
        mc.snr_step_db = self.snr_step_db;
        mc.trials_per_point = self.trials;
        mc.beamwidth_constant = self.beamwidth_constant;
        mc.resolution_window_beamwidths = self.resolution_window_beamwidths;
        mc.grid_half_span_beamwidths = self.grid_half_span_beamwidths;
        mc.signal_model = self.parse_signal_model()?;
        Ok(mc)
    }
}
