use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};

/// Exact CSV header, one column per [`ResultRow`] field.
pub const CSV_HEADER: &str =
    "scheme,metric,power_dbm,n_t,air_bits_4d,se_bits_s_hz,ci95,sel_metric_mean,wall_s";

/// One sweep point.
///
/// `ci95` is the 95% half-width of `se_bits_s_hz`, taken over blocks.
/// Empty optional fields mean "not applicable" (`sel_metric_mean` for
/// schemes without selection) or "not recorded" (`wall_s` unless timing is
/// requested, which keeps the table reproducible byte for byte).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scheme: String,
    pub metric: String,
    pub power_dbm: f64,
    pub n_t: usize,
    #[serde(rename = "air_bits_4d")]
    pub air_bits_per_4d: f64,
    #[serde(rename = "se_bits_s_hz")]
    pub se_bits_per_s_hz: f64,
    pub ci95: f64,
    #[serde(rename = "sel_metric_mean")]
    pub selected_metric_mean: Option<f64>,
    #[serde(rename = "wall_s")]
    pub wall_time_s: Option<f64>,
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::config("refusing to write an empty result table"));
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

pub fn parse_csv<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected header `{}`", header.join(","))));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_csv(f)
}

/// `results.csv` -> `results.<suffix>`.
pub fn sidecar_path(csv_path: &Path, suffix: &str) -> PathBuf {
    let stem = csv_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "results".into());
    csv_path.with_file_name(format!("{stem}.{suffix}"))
}

/// Per-point bookkeeping that does not belong in the result table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointMeta {
    pub scheme: String,
    pub power_dbm: f64,
    pub n_t: usize,
    pub wall_s: f64,
    /// Information bits per selection block.
    pub info_bits_per_block: usize,
    /// Input bits per ESS block after the pilot compensation.
    pub ess_input_bits: Option<usize>,
    /// Rate charged for pilots and DM loss, bits per 4D.
    pub overhead_bits_per_4d: f64,
    pub pilot_symbols: usize,
    /// Center-channel blocks whose pilots were misdetected.
    pub pilot_errors: usize,
    /// Mean 4D energy the metric's launch scale refers to.
    pub metric_reference_energy: Option<f64>,
    pub error: Option<String>,
}

/// Sidecar written next to every CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMetadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config_hash: String,
    pub workers: usize,
    pub config: ExperimentConfig,
    pub resolved: BTreeMap<String, serde_json::Value>,
    pub notes: Vec<String>,
    pub points: Vec<PointMeta>,
    pub total_wall_s: f64,
}

impl RunMetadata {
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }
}
