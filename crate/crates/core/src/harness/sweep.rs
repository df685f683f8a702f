use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use super::bound::{ss_bound_estimate, BOUND_SCHEME};
use super::config::{ExperimentConfig, Scheme};
use super::output::{emit_csv, sidecar_path, PointMeta, ResultRow, RunMetadata};
use super::point::{run_point, Evaluation, PointOutcome, Transmitter};
use super::seeds::SeedTree;
use crate::channel::carrier_bin;
use crate::error::{Error, Result};
use crate::selection::pilot_bits;
use crate::shaping::{ess_choose_emax, mb_fit};

/// Rows of a sweep in emission order, with their bookkeeping.
#[derive(Debug, Clone, Default)]
pub struct SweepReport {
    pub rows: Vec<ResultRow>,
    pub points: Vec<PointMeta>,
    /// `None` for points that failed.
    pub evaluations: Vec<Option<Evaluation>>,
}

impl SweepReport {
    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.error.is_some()).count()
    }

    fn push(&mut self, outcome: PointOutcome) {
        self.rows.push(outcome.row);
        self.points.push(outcome.meta);
        self.evaluations.push(Some(outcome.evaluation));
    }

    fn push_failure(&mut self, scheme: &str, metric: &str, power_dbm: f64, n_t: usize, err: Error) {
        log::error!("{scheme} P={power_dbm} dBm N_t={n_t} failed: {err}");
        self.rows.push(ResultRow {
            scheme: scheme.into(),
            metric: metric.into(),
            power_dbm,
            n_t,
            air_bits_per_4d: f64::NAN,
            se_bits_per_s_hz: f64::NAN,
            ci95: f64::NAN,
            selected_metric_mean: None,
            wall_time_s: None,
        });
        self.points.push(PointMeta {
            scheme: scheme.into(),
            power_dbm,
            n_t,
            wall_s: 0.0,
            info_bits_per_block: 0,
            ess_input_bits: None,
            overhead_bits_per_4d: f64::NAN,
            pilot_symbols: 0,
            pilot_errors: 0,
            metric_reference_energy: None,
            error: Some(err.to_string()),
        });
        self.evaluations.push(None);
    }

    /// Copies the measured wall times into the rows.
    pub fn with_timing(mut self) -> Self {
        for (r, p) in self.rows.iter_mut().zip(&self.points) {
            r.wall_time_s = Some(p.wall_s);
        }
        self
    }
}

fn sorted_powers(cfg: &ExperimentConfig) -> Vec<f64> {
    let mut p = cfg.sweep.power_dbm.clone();
    p.sort_by(f64::total_cmp);
    p.dedup();
    p
}

/// Cartesian product of schemes, powers and N_t values, sorted by
/// (scheme, power, N_t). Schemes without selection get the single N_t = 1.
pub fn sweep_points(cfg: &ExperimentConfig) -> Vec<(Scheme, f64, usize)> {
    let mut schemes = cfg.schemes.clone();
    schemes.sort();
    schemes.dedup();
    let mut n_ts = cfg.selection.n_t.clone();
    n_ts.sort_unstable();
    n_ts.dedup();
    let powers = sorted_powers(cfg);
    let mut out = Vec::new();
    for s in schemes {
        for &p in &powers {
            if s.selection().is_some() {
                out.extend(n_ts.iter().map(|&n| (s, p, n)));
            } else {
                out.push((s, p, 1));
            }
        }
    }
    out
}

fn metric_label(cfg: &ExperimentConfig, s: Scheme) -> &'static str {
    match s.selection() {
        Some(_) => cfg.selection.metric.name(),
        None => "none",
    }
}

/// Runs every sweep point; failing points yield diagnostic rows of NaNs.
pub fn sweep(cfg: &ExperimentConfig) -> SweepReport {
    let points = sweep_points(cfg);
    let outcomes: Vec<Result<PointOutcome>> = points
        .par_iter()
        .map(|&(s, p, n)| run_point(cfg, s, p, n))
        .collect();
    let mut report = SweepReport::default();
    for (&(s, p, n), o) in points.iter().zip(outcomes) {
        match o {
            Ok(o) => report.push(o),
            Err(e) => report.push_failure(s.name(), metric_label(cfg, s), p, n, e),
        }
    }
    report
}

/// SS-bound estimate at every configured power.
pub fn bound_sweep(cfg: &ExperimentConfig) -> SweepReport {
    let powers = sorted_powers(cfg);
    let outcomes: Vec<Result<PointOutcome>> = powers
        .par_iter()
        .map(|&p| ss_bound_estimate(cfg, p, cfg.bound.eta, cfg.bound.m_total))
        .collect();
    let mut report = SweepReport::default();
    for (&p, o) in powers.iter().zip(outcomes) {
        match o {
            Ok(o) => report.push(o),
            Err(e) => {
                let n_t = (1.0 / cfg.bound.eta).round() as usize;
                report.push_failure(BOUND_SCHEME, "NLI", p, n_t, e)
            }
        }
    }
    report
}

/// The SE-maximizing row of every (scheme, metric, N_t) group, in first
/// appearance order. Ties go to the lower power; failed rows are ignored.
pub fn optimal_rows(rows: &[ResultRow]) -> Vec<ResultRow> {
    let mut best: Vec<ResultRow> = Vec::new();
    for r in rows.iter().filter(|r| r.se_bits_per_s_hz.is_finite()) {
        match best
            .iter_mut()
            .find(|b| b.scheme == r.scheme && b.metric == r.metric && b.n_t == r.n_t)
        {
            Some(b) => {
                if r.se_bits_per_s_hz > b.se_bits_per_s_hz {
                    *b = r.clone();
                }
            }
            None => best.push(r.clone()),
        }
    }
    best
}

/// Runs `f` on a pool of `workers` threads (0: one per core).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Derived quantities that the configuration does not spell out.
pub fn resolved_defaults(cfg: &ExperimentConfig) -> Result<BTreeMap<String, serde_json::Value>> {
    use serde_json::json;
    let shaping = cfg.shaping_config()?;
    let n = cfg.selection.n_symbols;
    let dm_blocks = 4 * n / shaping.blocklength;
    let mb = mb_fit(shaping.rate, &shaping.alphabet)?;
    let wk = cfg.wk();
    let mut bsss = BTreeMap::new();
    let mut n_ts = cfg.selection.n_t.clone();
    n_ts.sort_unstable();
    n_ts.dedup();
    for &n_t in &n_ts {
        let tx = Transmitter::new(cfg, Scheme::EssBsss, n_t)?;
        bsss.insert(
            n_t.to_string(),
            json!({
                "pilot_bits": pilot_bits(n_t),
                "ess_input_bits": tx.ess_input_bits(),
                "ess_rate_bits_per_amplitude": tx.ess_input_bits().unwrap_or(0) as f64 / shaping.blocklength as f64,
                "info_bits_per_block": tx.info_bits(),
            }),
        );
    }
    let len = n * cfg.wdm.samples_per_symbol;
    let bin = cfg.wdm.sample_rate_ghz() / len as f64;
    let realized = if cfg.wdm.n_channels > 1 {
        (carrier_bin(&cfg.wdm, 1, len) - carrier_bin(&cfg.wdm, 0, len)) as f64 * bin
    } else {
        cfg.wdm.spacing_ghz
    };
    let mut m = BTreeMap::new();
    m.insert("ess_input_bits".into(), json!(shaping.input_bits()));
    m.insert("ess_emax".into(), json!(ess_choose_emax(&shaping)?));
    m.insert("ess_blocks_per_selection_block".into(), json!(dm_blocks));
    m.insert("bsss_rate_adjustment".into(), json!(bsss));
    m.insert("mb_lambda".into(), json!(mb.lambda));
    m.insert("mb_entropy_bits_per_amplitude".into(), json!(mb.entropy()));
    m.insert("wk_window".into(), json!(wk.window));
    m.insert("wk_stride".into(), json!(wk.stride));
    m.insert("book_seed".into(), json!(SeedTree::new(cfg.seed).book_seed()));
    m.insert("realized_channel_spacing_ghz".into(), json!(realized));
    m.insert("block_samples".into(), json!(len));
    Ok(m)
}

pub fn standard_notes() -> Vec<String> {
    [
        "ci95: 95% half-width of se_bits_s_hz over independent selection blocks",
        "SE: (AIR - overhead) * payload/total slots * symbol rate / spacing; overhead is the DM rate loss H(X) - R_info for ESS-based schemes",
        "SS-bound: rate penalty (1/n) log2(eta) bits/4D, an approximation of the full bound construction",
        "seeds: ChaCha8 seeded with the master seed, stream = purpose<<56 | channel<<44 | block<<16 | span",
        "each selection block is propagated as an independent cyclic waveform",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

/// Writes `<out>`, `<out stem>.summary.csv` and `<out stem>.meta.json`.
pub fn write_outputs(
    report: &SweepReport,
    cfg: &ExperimentConfig,
    out: &Path,
    command: &str,
    total_wall_s: f64,
) -> Result<()> {
    emit_csv(&report.rows, out)?;
    let best = optimal_rows(&report.rows);
    if !best.is_empty() {
        emit_csv(&best, &sidecar_path(out, "summary.csv"))?;
    }
    RunMetadata {
        tool: "seqsel".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        seed: cfg.seed,
        config_hash: cfg.hash(),
        workers: cfg.workers,
        config: cfg.clone(),
        resolved: resolved_defaults(cfg)?,
        notes: standard_notes(),
        points: report.points.clone(),
        total_wall_s,
    }
    .write(&sidecar_path(out, "meta.json"))
}
