use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn dbm_to_watt(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

/// Fiber and span layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberParams {
    pub beta2_ps2_per_km: f64,
    pub gamma_per_w_per_km: f64,
    pub alpha_db_per_km: f64,
    pub span_length_km: f64,
    pub n_spans: usize,
}

impl FiberParams {
    /// Standard single-mode fiber, 100 km spans.
    pub fn smf(n_spans: usize) -> Self {
        Self {
            beta2_ps2_per_km: -21.7,
            gamma_per_w_per_km: 1.27,
            alpha_db_per_km: 0.2,
            span_length_km: 100.0,
            n_spans,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.span_length_km > 0.0) {
            return Err(Error::config("span length must be positive"));
        }
        if !(self.alpha_db_per_km >= 0.0) {
            return Err(Error::config("attenuation must be nonnegative"));
        }
        if !self.beta2_ps2_per_km.is_finite() || !self.gamma_per_w_per_km.is_finite() {
            return Err(Error::config("fiber coefficients must be finite"));
        }
        Ok(())
    }

    /// Field attenuation in 1/km (power attenuation coefficient).
    pub fn alpha_linear(&self) -> f64 {
        self.alpha_db_per_km * std::f64::consts::LN_10 / 10.0
    }

    pub fn total_length_km(&self) -> f64 {
        self.span_length_km * self.n_spans as f64
    }

    /// Accumulated dispersion `beta2 * L_total` in ps^2.
    pub fn total_dispersion_ps2(&self) -> f64 {
        self.beta2_ps2_per_km * self.total_length_km()
    }

    /// `(1 - exp(-alpha L)) / alpha` of one span.
    pub fn effective_length_km(&self) -> f64 {
        let a = self.alpha_linear();
        if a == 0.0 {
            self.span_length_km
        } else {
            (1.0 - (-a * self.span_length_km).exp()) / a
        }
    }
}

/// WDM grid and transmitter settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WdmConfig {
    pub n_channels: usize,
    pub symbol_rate_gbd: f64,
    pub spacing_ghz: f64,
    pub rolloff: f64,
    pub samples_per_symbol: usize,
    pub launch_power_dbm: f64,
}

impl WdmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_channels == 0 || self.n_channels % 2 == 0 {
            return Err(Error::config("number of WDM channels must be odd"));
        }
        if !(self.rolloff >= 0.0 && self.rolloff <= 1.0) {
            return Err(Error::config("roll-off must lie in [0, 1]"));
        }
        if self.samples_per_symbol < 2 {
            return Err(Error::config("at least 2 samples per symbol are required"));
        }
        if self.n_channels > 1 && self.spacing_ghz < self.symbol_rate_gbd * (1.0 + self.rolloff) {
            return Err(Error::config("channel spacing narrower than the signal bandwidth"));
        }
        let grid = if self.n_channels == 1 {
            self.bandwidth_ghz()
        } else {
            self.n_channels as f64 * self.spacing_ghz
        };
        if self.sample_rate_ghz() < grid {
            return Err(Error::Aliasing(format!(
                "sample rate {} GHz below the {}-channel grid",
                self.sample_rate_ghz(),
                self.n_channels
            )));
        }
        Ok(())
    }

    pub fn sample_rate_ghz(&self) -> f64 {
        self.symbol_rate_gbd * self.samples_per_symbol as f64
    }

    /// Occupied bandwidth of one channel.
    pub fn bandwidth_ghz(&self) -> f64 {
        self.symbol_rate_gbd * (1.0 + self.rolloff)
    }

    pub fn launch_power_w(&self) -> f64 {
        dbm_to_watt(self.launch_power_dbm)
    }

    pub fn center_channel(&self) -> usize {
        self.n_channels / 2
    }

    /// Nominal carrier offset of channel `k` from the grid center.
    pub fn carrier_offset_ghz(&self, k: usize) -> f64 {
        (k as f64 - (self.n_channels as f64 - 1.0) / 2.0) * self.spacing_ghz
    }

    pub fn with_power(&self, dbm: f64) -> Self {
        Self {
            launch_power_dbm: dbm,
            ..self.clone()
        }
    }

    /// Single-channel variant used for metric emulation.
    pub fn single_channel(&self, samples_per_symbol: usize) -> Self {
        Self {
            n_channels: 1,
            samples_per_symbol,
            ..self.clone()
        }
    }
}

/// EDFA settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplifierParams {
    pub noise_figure_db: f64,
    pub center_frequency_thz: f64,
    pub noiseless: bool,
}

impl AmplifierParams {
    pub fn new(noise_figure_db: f64) -> Self {
        Self {
            noise_figure_db,
            center_frequency_thz: 193.41,
            noiseless: false,
        }
    }

    pub fn noiseless() -> Self {
        Self {
            noiseless: true,
            ..Self::new(5.0)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.noiseless && self.noise_figure_db < 3.0 {
            return Err(Error::config("EDFA noise figure below the 3 dB quantum limit"));
        }
        Ok(())
    }

    /// Spontaneous emission factor `n_sp = NF / 2`.
    pub fn n_sp(&self) -> f64 {
        10f64.powf(self.noise_figure_db / 10.0) / 2.0
    }
}

/// Split-step step-size policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum StepPolicy {
    /// Uniform steps; fails if a step exceeds the nonlinear-phase sanity bound.
    Fixed { steps_per_span: usize },
    /// Steps sized so the peak nonlinear phase per step stays below the bound.
    Adaptive { max_phase_rad: f64 },
}

impl StepPolicy {
    /// Sanity bound on the per-step nonlinear phase in fixed-step mode.
    pub const MAX_FIXED_PHASE: f64 = 0.05;
}

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy::Fixed {
            steps_per_span: 1000,
        }
    }
}
