//! Bit-wise achievable information rate with a mismatched circular Gaussian
//! auxiliary channel.
//!
//! Each real rail carries a sign bit and a binary-reflected Gray label of
//! the amplitude index. The rate is
//! `H(X) - sum_i E[-log2 q(b_i | y)]`, with `q` the bit posterior of the
//! auxiliary channel under the shaped prior, evaluated per rail and reported
//! per 4D symbol.

use crate::error::{Error, Result};
use crate::shaping::{entropy_bits, AmplitudeAlphabet, MbDistribution, Symbol4D};

/// Minimum number of 4D symbols for a rate estimate.
pub const MIN_SYMBOLS: usize = 1000;

const Z95: f64 = 1.959_963_984_540_054;

/// Product prior over rails: shaped amplitude times a uniform sign.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPrior {
    levels: Vec<u32>,
    amp_probs: Vec<f64>,
}

impl SymbolPrior {
    pub fn new(alphabet: &AmplitudeAlphabet, amp_probs: Vec<f64>) -> Result<Self> {
        if amp_probs.len() != alphabet.len() {
            return Err(Error::LengthMismatch {
                what: "prior probabilities",
                expected: alphabet.len(),
                actual: amp_probs.len(),
            });
        }
        let s: f64 = amp_probs.iter().sum();
        if (s - 1.0).abs() > 1e-9 || amp_probs.iter().any(|&p| p < 0.0) {
            return Err(Error::config("prior probabilities must form a distribution"));
        }
        Ok(Self {
            levels: alphabet.levels().to_vec(),
            amp_probs,
        })
    }

    pub fn uniform(alphabet: &AmplitudeAlphabet) -> Self {
        let p = 1.0 / alphabet.len() as f64;
        Self {
            levels: alphabet.levels().to_vec(),
            amp_probs: vec![p; alphabet.len()],
        }
    }

    pub fn from_mb(dist: &MbDistribution) -> Self {
        Self {
            levels: dist.levels().to_vec(),
            amp_probs: dist.probs.clone(),
        }
    }

    /// Empirical amplitude frequencies of exact constellation symbols.
    pub fn empirical(symbols: &[Symbol4D], alphabet: &AmplitudeAlphabet) -> Self {
        let mut counts = vec![0usize; alphabet.len()];
        for s in symbols {
            for r in s.rails() {
                counts[alphabet.nearest(r.abs())] += 1;
            }
        }
        let total = counts.iter().sum::<usize>().max(1) as f64;
        Self {
            levels: alphabet.levels().to_vec(),
            amp_probs: counts.into_iter().map(|c| c as f64 / total).collect(),
        }
    }

    pub fn amp_probs(&self) -> &[f64] {
        &self.amp_probs
    }

    /// `H(X)` per 4D symbol: four rails, each amplitude entropy plus a sign bit.
    pub fn entropy_per_4d(&self) -> f64 {
        4.0 * (entropy_bits(&self.amp_probs) + 1.0)
    }

    /// Mean 4D symbol energy.
    pub fn mean_energy_4d(&self) -> f64 {
        4.0 * self
            .amp_probs
            .iter()
            .zip(&self.levels)
            .map(|(p, &l)| p * (l as f64).powi(2))
            .sum::<f64>()
    }
}

/// Rate estimate with its Monte Carlo uncertainty.
#[derive(Debug, Clone, PartialEq)]
pub struct AirResult {
    pub air_bits_per_4d: f64,
    /// Fitted auxiliary-channel variance per complex (2D) dimension.
    pub noise_variance_est: f64,
    pub n_symbols: usize,
    /// Half-width of the 95% confidence interval.
    pub ci95: f64,
}

struct RailModel {
    /// `(value, ln prior, label)` for every signed point.
    points: Vec<(f64, f64, u32)>,
    bits: usize,
    levels: Vec<u32>,
}

impl RailModel {
    fn new(prior: &SymbolPrior) -> Self {
        let m = prior.levels.len().trailing_zeros() as usize;
        let mut points = Vec::with_capacity(2 * prior.levels.len());
        for (j, (&l, &p)) in prior.levels.iter().zip(&prior.amp_probs).enumerate() {
            if p <= 0.0 {
                continue;
            }
            let gray = (j ^ (j >> 1)) as u32;
            let lp = p.ln() - std::f64::consts::LN_2;
            points.push((l as f64, lp, gray));
            points.push((-(l as f64), lp, gray | (1 << m)));
        }
        Self {
            points,
            bits: m + 1,
            levels: prior.levels.clone(),
        }
    }

    fn label_of(&self, tx: f64) -> Result<(u32, f64)> {
        let a = tx.abs();
        let j = self
            .levels
            .iter()
            .position(|&l| (l as f64 - a).abs() < 1e-9)
            .ok_or_else(|| Error::config(format!("transmitted rail {tx} is not a constellation point")))?;
        let m = self.bits - 1;
        let gray = (j ^ (j >> 1)) as u32;
        Ok((if tx < 0.0 { gray | (1 << m) } else { gray }, if tx < 0.0 { -(self.levels[j] as f64) } else { self.levels[j] as f64 }))
    }

    /// `(bit-metric loss, symbol-metric loss)` in bits for one rail.
    fn losses(&self, tx: f64, y: f64, inv_two_var: f64, scratch: &mut Vec<f64>) -> Result<(f64, f64)> {
        let (label, x) = self.label_of(tx)?;
        scratch.clear();
        scratch.extend(self.points.iter().map(|&(v, lp, _)| lp - (y - v).powi(2) * inv_two_var));
        let max = scratch.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = |keep: &dyn Fn(u32) -> bool| -> f64 {
            let s: f64 = self
                .points
                .iter()
                .zip(scratch.iter())
                .filter(|(p, _)| keep(p.2))
                .map(|(_, &m)| (m - max).exp())
                .sum();
            max + s.ln()
        };
        let total = lse(&|_| true);
        let mut bit_loss = 0.0;
        for i in 0..self.bits {
            let b = (label >> i) & 1;
            let matched = lse(&|l| (l >> i) & 1 == b);
            bit_loss += total - matched;
        }
        let tx_metric = self
            .points
            .iter()
            .zip(scratch.iter())
            .find(|(p, _)| p.2 == label && p.0 == x)
            .map(|(_, &m)| m)
            .ok_or_else(|| Error::config("transmitted point has zero prior probability"))?;
        let ln2 = std::f64::consts::LN_2;
        Ok((bit_loss / ln2, (total - tx_metric) / ln2))
    }
}

fn check(tx: &[Symbol4D], rx: &[Symbol4D]) -> Result<()> {
    if tx.len() != rx.len() {
        return Err(Error::LengthMismatch {
            what: "received symbols",
            expected: tx.len(),
            actual: rx.len(),
        });
    }
    if tx.len() < MIN_SYMBOLS {
        return Err(Error::Insufficient(format!(
            "{} symbols, at least {MIN_SYMBOLS} required",
            tx.len()
        )));
    }
    Ok(())
}

/// Per-4D-symbol `(bit loss, symbol loss)` and the fitted 2D variance.
fn per_symbol_losses(
    tx: &[Symbol4D],
    rx: &[Symbol4D],
    prior: &SymbolPrior,
) -> Result<(Vec<(f64, f64)>, f64)> {
    let var2d = tx
        .iter()
        .zip(rx)
        .map(|(t, r)| (t.x - r.x).norm_sqr() + (t.y - r.y).norm_sqr())
        .sum::<f64>()
        / (2 * tx.len()) as f64;
    let floor = 1e-12 * prior.mean_energy_4d() / 2.0;
    let var_rail = var2d.max(floor) / 2.0;
    let inv = 1.0 / (2.0 * var_rail);
    let model = RailModel::new(prior);
    let mut scratch = Vec::with_capacity(model.points.len());
    let mut out = Vec::with_capacity(tx.len());
    for (t, r) in tx.iter().zip(rx) {
        let (mut bl, mut sl) = (0.0, 0.0);
        for (a, b) in t.rails().into_iter().zip(r.rails()) {
            let (x, y) = model.losses(a, b, inv, &mut scratch)?;
            bl += x;
            sl += y;
        }
        out.push((bl, sl));
    }
    Ok((out, var2d))
}

fn summarize(values: &[f64], entropy: f64, var2d: f64, n_symbols: usize) -> AirResult {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    AirResult {
        air_bits_per_4d: (entropy - mean).clamp(0.0, entropy),
        noise_variance_est: var2d,
        n_symbols,
        ci95: Z95 * (var / n).sqrt(),
    }
}

/// Bit-wise AIR over aligned transmitted/received symbols.
pub fn air_bitwise(tx: &[Symbol4D], rx: &[Symbol4D], prior: &SymbolPrior) -> Result<AirResult> {
    check(tx, rx)?;
    let (losses, var) = per_symbol_losses(tx, rx, prior)?;
    let bit: Vec<f64> = losses.iter().map(|l| l.0).collect();
    Ok(summarize(&bit, prior.entropy_per_4d(), var, tx.len()))
}

/// As [`air_bitwise`], with the confidence interval taken over independent
/// blocks of `block_len` symbols instead of individual symbols.
pub fn air_bitwise_blocked(
    tx: &[Symbol4D],
    rx: &[Symbol4D],
    prior: &SymbolPrior,
    block_len: usize,
) -> Result<AirResult> {
    air_bitwise_block_rates(tx, rx, prior, block_len).map(|r| r.0)
}

/// [`air_bitwise_blocked`] together with the unclipped rate `H(X) - loss` of
/// every block, all under the pooled auxiliary channel.
pub fn air_bitwise_block_rates(
    tx: &[Symbol4D],
    rx: &[Symbol4D],
    prior: &SymbolPrior,
    block_len: usize,
) -> Result<(AirResult, Vec<f64>)> {
    check(tx, rx)?;
    if block_len == 0 || tx.len() % block_len != 0 {
        return Err(Error::config("symbol count is not a whole number of blocks"));
    }
    let (losses, var) = per_symbol_losses(tx, rx, prior)?;
    let per_block: Vec<f64> = losses
        .chunks_exact(block_len)
        .map(|c| c.iter().map(|l| l.0).sum::<f64>() / block_len as f64)
        .collect();
    let h = prior.entropy_per_4d();
    let rates = per_block.iter().map(|l| h - l).collect();
    Ok((summarize(&per_block, h, var, tx.len()), rates))
}

/// Symbol-wise mutual information under the same auxiliary channel; an upper
/// reference for the bit-wise rate.
pub fn mi_symbolwise(tx: &[Symbol4D], rx: &[Symbol4D], prior: &SymbolPrior) -> Result<AirResult> {
    check(tx, rx)?;
    let (losses, var) = per_symbol_losses(tx, rx, prior)?;
    let sym: Vec<f64> = losses.iter().map(|l| l.1).collect();
    Ok(summarize(&sym, prior.entropy_per_4d(), var, tx.len()))
}
