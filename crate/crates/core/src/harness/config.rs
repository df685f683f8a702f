use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::{AmplifierParams, FiberParams, StepPolicy, WdmConfig};
use crate::error::{Error, Result};
use crate::selection::{MetricKind, SchemeKind, WkMetric};
use crate::shaping::{AmplitudeAlphabet, ShapingConfig};

/// Transmission scheme of a sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "MB")]
    Mb,
    #[serde(rename = "ESS")]
    Ess,
    #[serde(rename = "ESS+BSSS")]
    EssBsss,
    #[serde(rename = "ESS+SISS")]
    EssSiss,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Mb => "MB",
            Scheme::Ess => "ESS",
            Scheme::EssBsss => "ESS+BSSS",
            Scheme::EssSiss => "ESS+SISS",
        }
    }

    pub fn selection(&self) -> Option<SchemeKind> {
        match self {
            Scheme::EssBsss => Some(SchemeKind::Bsss),
            Scheme::EssSiss => Some(SchemeKind::Siss),
            _ => None,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Preset the configuration file is merged over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    #[default]
    Desk,
    Paper,
}

impl std::str::FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Scale::Desk),
            "paper" => Ok(Scale::Paper),
            other => Err(Error::Config(format!("unknown scale `{other}` (expected desk or paper)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapingSection {
    /// DM rate in bits per amplitude (also the MB target entropy).
    pub rate_bits_per_amplitude: f64,
    /// Amplitudes per ESS block.
    pub blocklength: usize,
    pub levels: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionSection {
    /// Number of test sequences; one row per value for selection schemes.
    pub n_t: Vec<usize>,
    pub metric: MetricKind,
    /// 4D symbols per selection block.
    pub n_symbols: usize,
    /// WK window and stride in 4D symbols, clamped to the block.
    pub wk_window: usize,
    pub wk_stride: usize,
    /// Oversampling of the NLI metric's single-channel emulation.
    pub nli_samples_per_symbol: usize,
    pub nli_steps: StepPolicy,
    /// Zero symbols on each side of the emulated block; 0 emulates the
    /// block as a periodic sequence.
    pub nli_guard_symbols: usize,
    /// Unselected blocks averaged to fix the metric's launch scale.
    pub calibration_blocks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub power_dbm: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSection {
    /// Acceptance rate.
    pub eta: f64,
    /// Candidate blocks generated per channel.
    pub m_total: usize,
}

/// Complete description of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Selection blocks per WDM channel and point.
    pub n_blocks: usize,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    /// Selection blocks concatenated into one cyclic waveform; 0 puts all
    /// blocks of a point into a single waveform.
    pub blocks_per_waveform: usize,
    pub schemes: Vec<Scheme>,
    pub shaping: ShapingSection,
    pub selection: SelectionSection,
    pub fiber: FiberParams,
    pub wdm: WdmConfig,
    pub amp: AmplifierParams,
    /// Step policy of the transmission link.
    pub steps: StepPolicy,
    pub sweep: SweepSection,
    pub bound: BoundSection,
}

const DESK: &str = r#"
seed = 1
n_blocks = 100
workers = 0
blocks_per_waveform = 0
schemes = ["MB", "ESS", "ESS+BSSS"]

[shaping]
rate_bits_per_amplitude = 1.3
blocklength = 256
levels = [1, 3, 5, 7]

[selection]
n_t = [16]
metric = "NLI"
n_symbols = 64
wk_window = 128
wk_stride = 64
nli_samples_per_symbol = 4
nli_steps = { mode = "adaptive", max_phase_rad = 0.01 }
nli_guard_symbols = 0
calibration_blocks = 64

[fiber]
beta2_ps2_per_km = -21.7
gamma_per_w_per_km = 1.27
alpha_db_per_km = 0.2
span_length_km = 100.0
n_spans = 10

[wdm]
n_channels = 3
symbol_rate_gbd = 46.5
spacing_ghz = 50.0
rolloff = 0.05
samples_per_symbol = 8
launch_power_dbm = 0.0

[amp]
noise_figure_db = 5.0
center_frequency_thz = 193.41
noiseless = false

[steps]
mode = "adaptive"
max_phase_rad = 0.005

[sweep]
power_dbm = [-2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0]

[bound]
eta = 0.0625
m_total = 1600
"#;

const PAPER: &str = r#"
n_blocks = 200
schemes = ["MB", "ESS", "ESS+BSSS", "ESS+SISS"]

[selection]
n_t = [1, 2, 4, 8, 16, 32, 64, 128, 256]
n_symbols = 256

[fiber]
n_spans = 30

[wdm]
n_channels = 5
samples_per_symbol = 16

[bound]
eta = 0.001
m_total = 200000
"#;

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn parse_table(text: &str, origin: &str) -> Result<toml::Table> {
    text.parse::<toml::Table>()
        .map_err(|e| Error::Parse(format!("{origin}: {e}")))
}

impl ExperimentConfig {
    /// Resolved preset without any file on top.
    pub fn preset(scale: Scale) -> Self {
        Self::from_toml_str(scale, "").expect("built-in presets are valid")
    }

    /// Merges `text` over the preset of `scale` and validates the result.
    pub fn from_toml_str(scale: Scale, text: &str) -> Result<Self> {
        let mut table = parse_table(DESK, "desk preset")?;
        if scale == Scale::Paper {
            merge(&mut table, parse_table(PAPER, "paper preset")?);
        }
        merge(&mut table, parse_table(text, "configuration")?);
        let cfg: Self = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(scale: Scale, path: Option<&Path>) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?,
            None => String::new(),
        };
        Self::from_toml_str(scale, &text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// SHA-256 of the canonical TOML form.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn alphabet(&self) -> Result<AmplitudeAlphabet> {
        AmplitudeAlphabet::new(self.shaping.levels.clone())
    }

    pub fn shaping_config(&self) -> Result<ShapingConfig> {
        ShapingConfig::new(
            self.shaping.rate_bits_per_amplitude,
            self.shaping.blocklength,
            self.alphabet()?,
        )
    }

    /// WK metric with window and stride clamped to the block.
    pub fn wk(&self) -> WkMetric {
        let w = self.selection.wk_window.clamp(1, self.selection.n_symbols);
        WkMetric::new(w, self.selection.wk_stride.clamp(1, w))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_blocks == 0 {
            return Err(Error::config("n_blocks must be at least 1"));
        }
        if self.schemes.is_empty() {
            return Err(Error::config("no schemes configured"));
        }
        if self.sweep.power_dbm.is_empty() || self.sweep.power_dbm.iter().any(|p| !p.is_finite()) {
            return Err(Error::config("power sweep must hold finite values"));
        }
        let sel = &self.selection;
        if sel.n_t.is_empty() || sel.n_t.contains(&0) {
            return Err(Error::config("n_t list must be nonempty with values >= 1"));
        }
        if sel.n_symbols == 0 {
            return Err(Error::config("selection block must hold at least one symbol"));
        }
        if sel.nli_samples_per_symbol < 2 {
            return Err(Error::config("NLI emulation needs at least 2 samples per symbol"));
        }
        if sel.calibration_blocks == 0 {
            return Err(Error::config("calibration_blocks must be at least 1"));
        }
        let shaping = self.shaping_config()?;
        if (4 * sel.n_symbols) % shaping.blocklength != 0 {
            return Err(Error::config(format!(
                "{} amplitudes per selection block is not a multiple of the ESS blocklength {}",
                4 * sel.n_symbols,
                shaping.blocklength
            )));
        }
        self.fiber.validate()?;
        self.wdm.validate()?;
        self.wdm.single_channel(sel.nli_samples_per_symbol).validate()?;
        self.amp.validate()?;
        if !(self.bound.eta > 0.0 && self.bound.eta <= 1.0) {
            return Err(Error::config("bound acceptance rate must lie in (0, 1]"));
        }
        Ok(())
    }
}
