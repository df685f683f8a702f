use std::time::Instant;

use rayon::prelude::*;

use super::config::{ExperimentConfig, Scheme};
use super::output::{PointMeta, ResultRow};
use super::point::{build_metric, decoder_prior, evaluate, transmit, PointOutcome, TxBlock, Transmitter};
use super::seeds::{Purpose, SeedTree};
use crate::error::{Error, Result};
use crate::receiver::Overhead;
use crate::selection::MetricKind;

/// Scheme label of bound rows.
pub const BOUND_SCHEME: &str = "SS-bound";

/// Smallest kept sample the estimate accepts.
pub const MIN_KEPT: usize = 30;

/// Selection-rate penalty `(1/n) log2(eta)` in bits per 4D symbol.
pub fn selection_penalty(eta: f64, n: usize) -> f64 {
    eta.log2() / n as f64
}

/// Empirical sequence-selection bound: of `m_total` i.i.d. ESS blocks per
/// channel the `ceil(eta * m_total)` with the lowest NLI metric are kept and
/// transmitted, and the rate is charged the selection penalty.
pub fn ss_bound_estimate(
    cfg: &ExperimentConfig,
    power_dbm: f64,
    eta: f64,
    m_total: usize,
) -> Result<PointOutcome> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::config("acceptance rate must lie in (0, 1]"));
    }
    let kept = ((eta * m_total as f64) - 1e-9).ceil().max(0.0) as usize;
    if kept < MIN_KEPT {
        return Err(Error::Insufficient(format!(
            "eta * m_total keeps {kept} blocks, at least {MIN_KEPT} required"
        )));
    }
    let start = Instant::now();
    let seeds = SeedTree::new(cfg.seed);
    let wdm = cfg.wdm.with_power(power_dbm);
    let tx = Transmitter::new(cfg, Scheme::Ess, 1)?;
    let channels = wdm.n_channels;
    let draw = |c: usize, j: usize| tx.block(&mut seeds.rng(Purpose::Data, c, j, 0), None);

    let mut costs = Vec::new();
    let (selection, e_ref): (Vec<Vec<usize>>, Option<f64>) = if kept >= m_total {
        ((0..channels).map(|_| (0..m_total).collect()).collect(), None)
    } else {
        let e_ref = tx.reference_energy(&seeds, cfg.selection.calibration_blocks)?;
        let metric = build_metric(cfg, MetricKind::Nli, &wdm, e_ref)?;
        let mut keep = Vec::with_capacity(channels);
        for c in 0..channels {
            let mut scored: Vec<(f64, usize)> = (0..m_total)
                .into_par_iter()
                .map(|j| Ok((metric.cost(&draw(c, j)?.symbols)?.cost, j)))
                .collect::<Result<_>>()?;
            scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            scored.truncate(kept);
            costs.extend(scored.iter().map(|s| s.0));
            let mut best: Vec<usize> = scored.iter().map(|s| s.1).collect();
            best.sort_unstable();
            keep.push(best);
        }
        (keep, Some(e_ref))
    };

    let blocks: Vec<Vec<TxBlock>> = (0..kept)
        .into_par_iter()
        .map(|b| (0..channels).map(|c| draw(c, selection[c][b])).collect::<Result<_>>())
        .collect::<Result<_>>()?;

    let link = transmit(cfg, &wdm, &seeds, &blocks, None)?;
    let prior = decoder_prior(&tx, &link.tx);
    let n = cfg.selection.n_symbols;
    let base = tx.overhead(&prior);
    let overhead = Overhead {
        bits_per_4d: base.bits_per_4d - selection_penalty(eta, n),
        ..base
    };
    let evaluation = evaluate(&link, &prior, overhead, &wdm, n)?;
    let wall_s = start.elapsed().as_secs_f64();
    let n_t = (1.0 / eta).round() as usize;
    let row = ResultRow {
        scheme: BOUND_SCHEME.into(),
        metric: MetricKind::Nli.name().into(),
        power_dbm,
        n_t,
        air_bits_per_4d: evaluation.air_bits_per_4d,
        se_bits_per_s_hz: evaluation.se_bits_per_s_hz,
        ci95: evaluation.ci95,
        selected_metric_mean: (!costs.is_empty()).then(|| costs.iter().sum::<f64>() / costs.len() as f64),
        wall_time_s: None,
    };
    let meta = PointMeta {
        scheme: BOUND_SCHEME.into(),
        power_dbm,
        n_t,
        wall_s,
        info_bits_per_block: tx.info_bits(),
        ess_input_bits: tx.ess_input_bits(),
        overhead_bits_per_4d: overhead.bits_per_4d,
        pilot_symbols: 0,
        pilot_errors: 0,
        metric_reference_energy: e_ref,
        error: None,
    };
    Ok(PointOutcome { row, meta, evaluation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn penalty_arithmetic() {
        assert_eq!(selection_penalty(1.0, 64), 0.0);
        assert!((selection_penalty(1.0 / 256.0, 256) + 0.03125).abs() < 1e-15);
    }

    #[test]
    fn too_few_kept_blocks() {
        let cfg = ExperimentConfig::preset(super::super::config::Scale::Desk);
        assert!(matches!(ss_bound_estimate(&cfg, 0.0, 0.01, 100), Err(Error::Insufficient(_))));
        assert!(ss_bound_estimate(&cfg, 0.0, 0.0, 100).is_err());
    }
}
