use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::metric::{MetricValue, SelectionMetric};
use crate::channel::{
    launch_amplitude, propagate_link, rrc_modulate, AmplifierParams, FiberParams, StepPolicy,
    WdmConfig,
};
use crate::error::Result;
use crate::receiver::{cdc, matched_filter_sample, mean_phase_comp, RxChain};
use crate::shaping::Symbol4D;

/// Nonlinear-interference metric: squared distance between a block and its
/// image after noiseless single-channel propagation and the standard
/// receiver chain (CDC, matched filter, sampling, mean-phase compensation).
///
/// The block is propagated cyclically. Squared and plain norms share the same
/// argmin, so the squared norm is reported.
#[derive(Debug, Clone)]
pub struct NliMetric {
    fiber: FiberParams,
    wdm: WdmConfig,
    steps: StepPolicy,
    rx: RxChain,
    guard: usize,
}

impl NliMetric {
    /// `reference_energy` is the mean 4D energy that maps to the launch power
    /// of `wdm`; only the first channel of `wdm` is emulated.
    pub fn new(
        fiber: FiberParams,
        wdm: &WdmConfig,
        samples_per_symbol: usize,
        steps: StepPolicy,
        reference_energy: f64,
    ) -> Result<Self> {
        fiber.validate()?;
        let wdm = wdm.single_channel(samples_per_symbol);
        wdm.validate()?;
        let rx = RxChain::for_link(&fiber, &wdm, launch_amplitude(&wdm, reference_energy));
        Ok(Self {
            fiber,
            wdm,
            steps,
            rx,
            guard: 0,
        })
    }

    /// Surrounds the block with `guard` zero symbols on each side instead of
    /// emulating it as a periodic sequence.
    pub fn with_guard(mut self, guard: usize) -> Self {
        self.guard = guard;
        self
    }

    pub fn fiber(&self) -> &FiberParams {
        &self.fiber
    }

    /// Receiver output of the noiseless single-channel propagation.
    pub fn emulate(&self, symbols: &[Symbol4D]) -> Result<Vec<Symbol4D>> {
        let field = if self.guard == 0 {
            rrc_modulate(symbols, &self.wdm, self.rx.launch_amplitude)
        } else {
            let zero = Symbol4D::new(Complex64::default(), Complex64::default());
            let mut padded = vec![zero; self.guard];
            padded.extend_from_slice(symbols);
            padded.resize(symbols.len() + 2 * self.guard, zero);
            rrc_modulate(&padded, &self.wdm, self.rx.launch_amplitude)
        };
        let out = propagate_link(
            field,
            &self.fiber,
            &AmplifierParams::noiseless(),
            self.steps,
            |_| ChaCha8Rng::seed_from_u64(0),
        )?;
        let out = cdc(out, &self.rx);
        let y = matched_filter_sample(&out, &self.rx);
        mean_phase_comp(&y[self.guard..self.guard + symbols.len()], symbols)
    }
}

impl SelectionMetric for NliMetric {
    fn cost(&self, symbols: &[Symbol4D]) -> Result<MetricValue> {
        let y = self.emulate(symbols)?;
        let cost = symbols
            .iter()
            .zip(&y)
            .map(|(a, b)| (a.x - b.x).norm_sqr() + (a.y - b.y).norm_sqr())
            .sum();
        Ok(MetricValue { cost })
    }
}
