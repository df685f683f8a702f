use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, Scheme};
use super::output::{PointMeta, ResultRow};
use super::seeds::{Purpose, SeedTree};
use crate::channel::{
    launch_amplitude, propagate_link, rrc_modulate, wdm_demux, wdm_mux, WdmConfig,
};
use crate::error::{Error, Result};
use crate::receiver::{
    air_bitwise_block_rates, cdc, matched_filter_sample, mean_phase_comp, se_from_bits, Overhead,
    RxChain, SymbolPrior,
};
use crate::selection::{
    bsss_encode, pilot_bits, pilot_symbols, siss_encode, MetricKind, NliMetric, PermutationBook,
    PilotBook, ScramblerBook, SelectionMetric,
};
use crate::shaping::{
    mb_fit, mb_sample, pas_map, AmplitudeAlphabet, EssTrellis, MbDistribution, PasCodec, Symbol4D,
};

const Z95: f64 = 1.959_963_984_540_054;

enum Source {
    Mb(MbDistribution),
    Ess(PasCodec),
    Bsss { codec: PasCodec, book: ScramblerBook },
    Siss { codec: PasCodec, book: PermutationBook, pilots: PilotBook },
}

/// Bits-to-symbols chain of one scheme at one number of test sequences.
pub struct Transmitter {
    scheme: Scheme,
    n_t: usize,
    n: usize,
    alphabet: AmplitudeAlphabet,
    source: Source,
}

/// One transmitted block of one channel.
#[derive(Debug, Clone)]
pub struct TxBlock {
    /// Pilot symbols followed by the payload.
    pub symbols: Vec<Symbol4D>,
    pub pilots: usize,
    pub index: usize,
    pub cost: Option<f64>,
}

impl TxBlock {
    pub fn payload(&self) -> &[Symbol4D] {
        &self.symbols[self.pilots..]
    }
}

fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> Vec<bool> {
    (0..len).map(|_| rng.random()).collect()
}

impl Transmitter {
    pub fn new(cfg: &ExperimentConfig, scheme: Scheme, n_t: usize) -> Result<Self> {
        let n = cfg.selection.n_symbols;
        let alphabet = cfg.alphabet()?;
        let shaping = cfg.shaping_config()?;
        let n_t = if scheme.selection().is_some() { n_t } else { 1 };
        let book_seed = SeedTree::new(cfg.seed).book_seed();
        let codec = |extra: usize| -> Result<PasCodec> {
            let s = shaping.with_extra_bits(extra)?;
            PasCodec::new(EssTrellis::for_config(&s)?, alphabet.clone(), n)
        };
        let source = match scheme {
            Scheme::Mb => Source::Mb(mb_fit(shaping.rate, &alphabet)?),
            Scheme::Ess => Source::Ess(codec(0)?),
            Scheme::EssBsss => {
                let p = pilot_bits(n_t);
                let dm_blocks = 4 * n / shaping.blocklength;
                let codec = codec(p.div_ceil(dm_blocks))?;
                let book = ScramblerBook::generate(book_seed, n_t, codec.input_bits() - p)?;
                Source::Bsss { codec, book }
            }
            Scheme::EssSiss => Source::Siss {
                codec: codec(0)?,
                book: PermutationBook::generate(book_seed, n_t, n)?,
                pilots: PilotBook::new(&alphabet),
            },
        };
        Ok(Self {
            scheme,
            n_t,
            n,
            alphabet,
            source,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn alphabet(&self) -> &AmplitudeAlphabet {
        &self.alphabet
    }

    pub fn mb(&self) -> Option<&MbDistribution> {
        match &self.source {
            Source::Mb(d) => Some(d),
            _ => None,
        }
    }

    pub fn pilots(&self) -> Option<&PilotBook> {
        match &self.source {
            Source::Siss { pilots, .. } => Some(pilots),
            _ => None,
        }
    }

    pub fn pilot_symbols(&self) -> usize {
        match self.source {
            Source::Siss { .. } => pilot_symbols(self.n_t),
            _ => 0,
        }
    }

    /// Input bits per ESS block.
    pub fn ess_input_bits(&self) -> Option<usize> {
        match &self.source {
            Source::Mb(_) => None,
            Source::Ess(c) | Source::Bsss { codec: c, .. } | Source::Siss { codec: c, .. } => {
                Some(c.trellis().input_bits())
            }
        }
    }

    /// Information bits carried by one selection block. For MB this is the
    /// entropy of the block rounded down.
    pub fn info_bits(&self) -> usize {
        match &self.source {
            Source::Mb(d) => (4.0 * self.n as f64 * (d.entropy() + 1.0)).floor() as usize,
            Source::Ess(c) | Source::Siss { codec: c, .. } => c.input_bits(),
            Source::Bsss { book, .. } => book.len(),
        }
    }

    /// Rate charged against the bit-wise AIR before SE conversion: the DM
    /// rate loss `H(X) - R_info` for ESS-based schemes, nothing for MB.
    pub fn overhead(&self, prior: &SymbolPrior) -> Overhead {
        match self.source {
            Source::Mb(_) => Overhead::none(),
            _ => Overhead {
                bits_per_4d: prior.entropy_per_4d() - self.info_bits() as f64 / self.n as f64,
                payload_slots: self.n,
                total_slots: self.n + self.pilot_symbols(),
            },
        }
    }

    /// Block before any selection; the calibration population.
    fn unselected(&self, rng: &mut ChaCha8Rng) -> Result<Vec<Symbol4D>> {
        match &self.source {
            Source::Mb(d) => {
                let amps = mb_sample(d, rng, 4 * self.n);
                pas_map(&amps, &random_bits(rng, 4 * self.n))
            }
            Source::Ess(c) | Source::Bsss { codec: c, .. } | Source::Siss { codec: c, .. } => {
                c.encode(&random_bits(rng, c.input_bits()))
            }
        }
    }

    /// Mean 4D energy of `blocks` calibration blocks.
    pub fn reference_energy(&self, seeds: &SeedTree, blocks: usize) -> Result<f64> {
        let energies: Vec<f64> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let s = self.unselected(&mut seeds.rng(Purpose::Calibration, 0, b, 0))?;
                Ok(s.iter().map(Symbol4D::energy).sum::<f64>())
            })
            .collect::<Result<_>>()?;
        Ok(energies.iter().sum::<f64>() / (blocks * self.n) as f64)
    }

    /// Draws the data of one block from `rng` and runs the selection.
    pub fn block(&self, rng: &mut ChaCha8Rng, metric: Option<&dyn SelectionMetric>) -> Result<TxBlock> {
        let need = || metric.ok_or_else(|| Error::config("selection scheme without a metric"));
        match &self.source {
            Source::Mb(_) | Source::Ess(_) => Ok(TxBlock {
                symbols: self.unselected(rng)?,
                pilots: 0,
                index: 0,
                cost: None,
            }),
            Source::Bsss { codec, book } => {
                let bits = random_bits(rng, book.len());
                let sel = bsss_encode(&bits, book, |b| codec.encode(b), need()?)?;
                Ok(TxBlock {
                    symbols: sel.symbols,
                    pilots: 0,
                    index: sel.index,
                    cost: Some(sel.cost),
                })
            }
            Source::Siss { codec, book, pilots } => {
                let s = codec.encode(&random_bits(rng, codec.input_bits()))?;
                let sel = siss_encode(&s, book, pilots, need()?)?;
                Ok(TxBlock {
                    symbols: sel.symbols,
                    pilots: pilot_symbols(self.n_t),
                    index: sel.index,
                    cost: Some(sel.cost),
                })
            }
        }
    }
}

/// Selection metric of `kind` at the launch power of `wdm`.
pub fn build_metric(
    cfg: &ExperimentConfig,
    kind: MetricKind,
    wdm: &WdmConfig,
    reference_energy: f64,
) -> Result<Box<dyn SelectionMetric>> {
    Ok(match kind {
        MetricKind::Wk => Box::new(cfg.wk()),
        MetricKind::Nli => Box::new(
            NliMetric::new(
                cfg.fiber.clone(),
                wdm,
                cfg.selection.nli_samples_per_symbol,
                cfg.selection.nli_steps,
                reference_energy,
            )?
            .with_guard(cfg.selection.nli_guard_symbols),
        ),
    })
}

/// Center-channel outcome of a set of transmitted blocks.
pub struct LinkOutput {
    /// Transmitted and received payloads, blocks concatenated.
    pub tx: Vec<Symbol4D>,
    pub rx: Vec<Symbol4D>,
    pub pilot_errors: usize,
}

/// Propagates `blocks[b][channel]` over the WDM link and returns the
/// compensated center-channel payloads.
///
/// Consecutive blocks are concatenated into cyclic waveforms of
/// `cfg.blocks_per_waveform` blocks. Frame `f` draws the ASE of span `s`
/// from stream `(Ase, 0, f, s)`, and the mean phase is removed per frame.
pub fn transmit(
    cfg: &ExperimentConfig,
    wdm: &WdmConfig,
    seeds: &SeedTree,
    blocks: &[Vec<TxBlock>],
    pilots: Option<(&PilotBook, usize)>,
) -> Result<LinkOutput> {
    let (energy, count) = blocks
        .iter()
        .flatten()
        .flat_map(|b| &b.symbols)
        .fold((0.0, 0usize), |(e, n), s| (e + s.energy(), n + 1));
    if count == 0 {
        return Err(Error::config("nothing to transmit"));
    }
    let amplitude = launch_amplitude(wdm, energy / count as f64);
    let rx_chain = RxChain::for_link(&cfg.fiber, wdm, amplitude);
    let center = wdm.center_channel();
    let frame = match cfg.blocks_per_waveform {
        0 => blocks.len(),
        f => f.min(blocks.len()),
    };

    let per_frame: Vec<LinkOutput> = blocks
        .par_chunks(frame)
        .enumerate()
        .map(|(f, chunk)| {
            let concat = |c: usize| -> Vec<Symbol4D> {
                chunk.iter().flat_map(|b| b[c].symbols.iter().copied()).collect()
            };
            let fields: Vec<_> = (0..wdm.n_channels)
                .map(|c| rrc_modulate(&concat(c), wdm, amplitude))
                .collect();
            let field = wdm_mux(&fields, wdm)?;
            let field = propagate_link(field, &cfg.fiber, &cfg.amp, cfg.steps, |span| {
                seeds.rng(Purpose::Ase, 0, f, span)
            })?;
            let field = cdc(wdm_demux(&field, center, wdm)?, &rx_chain);
            let sent = concat(center);
            let y = mean_phase_comp(&matched_filter_sample(&field, &rx_chain), &sent)?;
            let mut out = LinkOutput {
                tx: Vec::new(),
                rx: Vec::new(),
                pilot_errors: 0,
            };
            let mut offset = 0;
            for b in chunk {
                let block = &b[center];
                let y = &y[offset..offset + block.symbols.len()];
                offset += block.symbols.len();
                if let Some((book, n_t)) = pilots.filter(|_| block.pilots > 0) {
                    let ok = book.decode_checked(&y[..block.pilots], n_t).ok() == Some(block.index);
                    out.pilot_errors += usize::from(!ok);
                }
                out.tx.extend_from_slice(block.payload());
                out.rx.extend_from_slice(&y[block.pilots..]);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut out = LinkOutput {
        tx: Vec::new(),
        rx: Vec::new(),
        pilot_errors: 0,
    };
    for f in per_frame {
        out.tx.extend(f.tx);
        out.rx.extend(f.rx);
        out.pilot_errors += f.pilot_errors;
    }
    Ok(out)
}

/// Rates of one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub air_bits_per_4d: f64,
    pub se_bits_per_s_hz: f64,
    pub ci95: f64,
    /// Unclipped net SE of every block; their mean is the point's SE
    /// before clipping at zero.
    pub block_se: Vec<f64>,
    pub overhead: Overhead,
}

pub fn evaluate(
    link: &LinkOutput,
    prior: &SymbolPrior,
    overhead: Overhead,
    wdm: &WdmConfig,
    block_len: usize,
) -> Result<Evaluation> {
    let (air, rates) = air_bitwise_block_rates(&link.tx, &link.rx, prior, block_len)?;
    let scale = overhead.slot_factor() * wdm.symbol_rate_gbd / wdm.spacing_ghz;
    let block_se: Vec<f64> = rates
        .iter()
        .map(|r| (r - overhead.bits_per_4d) * scale)
        .collect();
    Ok(Evaluation {
        air_bits_per_4d: air.air_bits_per_4d,
        se_bits_per_s_hz: se_from_bits(air.air_bits_per_4d, wdm, overhead),
        ci95: ci95(&block_se),
        block_se,
        overhead,
    })
}

/// 95% half-width of the mean of `values`.
pub fn ci95(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    if values.len() < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Z95 * (var / n).sqrt()
}

/// Everything [`run_point`] produces.
#[derive(Debug, Clone)]
pub struct PointOutcome {
    pub row: ResultRow,
    pub meta: PointMeta,
    pub evaluation: Evaluation,
}

/// Prior of the bit-wise decoder.
pub fn decoder_prior(tx: &Transmitter, payload: &[Symbol4D]) -> SymbolPrior {
    match tx.mb() {
        Some(d) => SymbolPrior::from_mb(d),
        None => SymbolPrior::empirical(payload, tx.alphabet()),
    }
}

/// Simulates `cfg.n_blocks` blocks per channel of `scheme` at one launch
/// power and number of test sequences.
pub fn run_point(cfg: &ExperimentConfig, scheme: Scheme, power_dbm: f64, n_t: usize) -> Result<PointOutcome> {
    let start = Instant::now();
    let seeds = SeedTree::new(cfg.seed);
    let wdm = cfg.wdm.with_power(power_dbm);
    let tx = Transmitter::new(cfg, scheme, n_t)?;

    let (metric, e_ref) = match scheme.selection() {
        Some(_) => {
            let e_ref = tx.reference_energy(&seeds, cfg.selection.calibration_blocks)?;
            (Some(build_metric(cfg, cfg.selection.metric, &wdm, e_ref)?), Some(e_ref))
        }
        None => (None, None),
    };

    let channels = wdm.n_channels;
    let flat: Vec<TxBlock> = (0..cfg.n_blocks * channels)
        .into_par_iter()
        .map(|i| {
            let (b, c) = (i / channels, i % channels);
            tx.block(&mut seeds.rng(Purpose::Data, c, b, 0), metric.as_deref())
        })
        .collect::<Result<_>>()?;
    let costs: Vec<f64> = flat.iter().filter_map(|b| b.cost).collect();
    let selected_metric_mean = (!costs.is_empty()).then(|| costs.iter().sum::<f64>() / costs.len() as f64);
    let blocks: Vec<Vec<TxBlock>> = flat.chunks(channels).map(<[TxBlock]>::to_vec).collect();

    let link = transmit(cfg, &wdm, &seeds, &blocks, tx.pilots().map(|p| (p, tx.n_t())))?;
    let prior = decoder_prior(&tx, &link.tx);
    let overhead = tx.overhead(&prior);
    let evaluation = evaluate(&link, &prior, overhead, &wdm, cfg.selection.n_symbols)?;
    let wall_s = start.elapsed().as_secs_f64();

    let row = ResultRow {
        scheme: scheme.name().into(),
        metric: match scheme.selection() {
            Some(_) => cfg.selection.metric.name().into(),
            None => "none".into(),
        },
        power_dbm,
        n_t: tx.n_t(),
        air_bits_per_4d: evaluation.air_bits_per_4d,
        se_bits_per_s_hz: evaluation.se_bits_per_s_hz,
        ci95: evaluation.ci95,
        selected_metric_mean,
        wall_time_s: None,
    };
    let meta = PointMeta {
        scheme: scheme.name().into(),
        power_dbm,
        n_t: tx.n_t(),
        wall_s,
        info_bits_per_block: tx.info_bits(),
        ess_input_bits: tx.ess_input_bits(),
        overhead_bits_per_4d: overhead.bits_per_4d,
        pilot_symbols: tx.pilot_symbols(),
        pilot_errors: link.pilot_errors,
        metric_reference_energy: e_ref,
        error: None,
    };
    log::info!(
        "{scheme} P={power_dbm} dBm N_t={}: SE {:.4} +- {:.4} bit/s/Hz ({wall_s:.1} s)",
        tx.n_t(),
        evaluation.se_bits_per_s_hz,
        evaluation.ci95
    );
    Ok(PointOutcome { row, meta, evaluation })
}
