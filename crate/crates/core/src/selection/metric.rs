use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shaping::Symbol4D;

/// Selection cost; lower is better.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MetricValue {
    pub cost: f64,
}

/// A cost function over candidate 4D symbol blocks.
pub trait SelectionMetric: Send + Sync {
    fn cost(&self, symbols: &[Symbol4D]) -> Result<MetricValue>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WkAggregate {
    #[default]
    Mean,
    Max,
}

/// Windowed kurtosis of the per-symbol energies `|x|^2 + |y|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkMetric {
    pub window: usize,
    pub stride: usize,
    pub aggregate: WkAggregate,
}

impl WkMetric {
    pub fn new(window: usize, stride: usize) -> Self {
        Self {
            window,
            stride,
            aggregate: WkAggregate::Mean,
        }
    }
}

impl SelectionMetric for WkMetric {
    fn cost(&self, symbols: &[Symbol4D]) -> Result<MetricValue> {
        wk_metric(symbols, self.window, self.stride, self.aggregate)
    }
}

/// For each window `w` of `window` symbols (starting every `stride`),
/// `k_w = mean(e^2) / mean(e)^2`; the windows are then aggregated.
pub fn wk_metric(
    symbols: &[Symbol4D],
    window: usize,
    stride: usize,
    aggregate: WkAggregate,
) -> Result<MetricValue> {
    let n = symbols.len();
    if window == 0 || window > n {
        return Err(Error::config(format!("window {window} outside [1, {n}]")));
    }
    if stride == 0 || stride > window {
        return Err(Error::config(format!("stride {stride} outside [1, {window}]")));
    }
    let mut s1 = Vec::with_capacity(n + 1);
    let mut s2 = Vec::with_capacity(n + 1);
    s1.push(0.0);
    s2.push(0.0);
    for s in symbols {
        let e = s.energy();
        s1.push(s1.last().unwrap() + e);
        s2.push(s2.last().unwrap() + e * e);
    }
    let w = window as f64;
    let mut acc = match aggregate {
        WkAggregate::Mean => 0.0,
        WkAggregate::Max => f64::NEG_INFINITY,
    };
    let mut count = 0usize;
    for start in (0..=n - window).step_by(stride) {
        let a = s1[start + window] - s1[start];
        let b = s2[start + window] - s2[start];
        if a <= 0.0 {
            return Err(Error::Metric(format!("window at {start} has zero energy")));
        }
        let k = w * b / (a * a);
        match aggregate {
            WkAggregate::Mean => acc += k,
            WkAggregate::Max => acc = acc.max(k),
        }
        count += 1;
    }
    let cost = match aggregate {
        WkAggregate::Mean => acc / count as f64,
        WkAggregate::Max => acc,
    };
    Ok(MetricValue { cost })
}
