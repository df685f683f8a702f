//! Sequence selection: bit-scrambling (BSSS) and symbol-interleaving (SISS)
//! test-sequence generation, the receiver-known transform books, and the
//! selection metrics.

mod books;
mod bsss;
mod metric;
mod nli;
mod pilots;
mod siss;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use books::{generate_books, Book, PermutationBook, ScramblerBook};
pub use bsss::{bsss_candidate_bits, bsss_decode, bsss_encode};
pub use metric::{wk_metric, MetricValue, SelectionMetric, WkAggregate, WkMetric};
pub use nli::NliMetric;
pub use pilots::{pilot_bits, pilot_symbols, PilotBook};
pub use siss::{siss_decode, siss_encode};

use crate::error::{Error, Result};
use crate::shaping::Symbol4D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SchemeKind {
    #[serde(rename = "BSSS")]
    Bsss,
    #[serde(rename = "SISS")]
    Siss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricKind {
    #[serde(rename = "NLI")]
    Nli,
    #[serde(rename = "WK")]
    Wk,
}

impl MetricKind {
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Nli => "NLI",
            MetricKind::Wk => "WK",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionConfig {
    pub scheme: SchemeKind,
    pub n_t: usize,
    pub metric: MetricKind,
    /// 4D symbols per selection block.
    pub n: usize,
}

impl SelectionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_t == 0 {
            return Err(Error::config("at least one test sequence is required"));
        }
        if self.n == 0 {
            return Err(Error::config("selection block must hold at least one symbol"));
        }
        Ok(())
    }

    pub fn pilot_bits(&self) -> usize {
        pilot_bits(self.n_t)
    }

    pub fn pilot_symbols(&self) -> usize {
        pilot_symbols(self.n_t)
    }
}

/// Outcome of one selection round.
#[derive(Debug, Clone, PartialEq)]
pub struct Selected {
    /// Transmitted block (for SISS including the leading pilot symbols).
    pub symbols: Vec<Symbol4D>,
    pub index: usize,
    pub cost: f64,
}

/// Scores all candidates and keeps the cheapest; ties go to the lowest index.
pub(crate) fn select_best<F>(n_t: usize, candidate: F) -> Result<Selected>
where
    F: Fn(usize) -> Result<(Vec<Symbol4D>, f64)> + Sync,
{
    let scored: Vec<(Vec<Symbol4D>, f64)> = (0..n_t)
        .into_par_iter()
        .map(&candidate)
        .collect::<Result<_>>()?;
    let mut best: Option<(usize, f64)> = None;
    for (i, (_, c)) in scored.iter().enumerate() {
        if !c.is_finite() {
            return Err(Error::Metric(format!("candidate {i} has non-finite cost {c}")));
        }
        if best.is_none_or(|(_, b)| *c < b) {
            best = Some((i, *c));
        }
    }
    let (index, cost) = best.ok_or_else(|| Error::config("no candidates"))?;
    let symbols = scored.into_iter().nth(index).unwrap().0;
    Ok(Selected {
        symbols,
        index,
        cost,
    })
}
