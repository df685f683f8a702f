use num_complex::Complex64;

use crate::channel::{
    angular_frequencies, bin_frequency_ghz, rrc_response, FiberParams, FieldWaveform, Spectrum,
    WdmConfig,
};
use crate::shaping::Symbol4D;

/// Static receiver configuration for one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct RxChain {
    /// Dispersion to undo, `beta2 * L_total` of the link, in ps^2.
    pub link_dispersion_ps2: f64,
    pub symbol_rate_gbd: f64,
    pub rolloff: f64,
    pub samples_per_symbol: usize,
    /// Transmit scale from constellation units to sqrt(W).
    pub launch_amplitude: f64,
}

impl RxChain {
    pub fn for_link(fiber: &FiberParams, wdm: &WdmConfig, launch_amplitude: f64) -> Self {
        Self {
            link_dispersion_ps2: fiber.total_dispersion_ps2(),
            symbol_rate_gbd: wdm.symbol_rate_gbd,
            rolloff: wdm.rolloff,
            samples_per_symbol: wdm.samples_per_symbol,
            launch_amplitude,
        }
    }
}

/// Frequency-domain all-pass inverse of the link's accumulated dispersion.
pub fn cdc(mut field: FieldWaveform, rx: &RxChain) -> FieldWaveform {
    if rx.link_dispersion_ps2 == 0.0 || field.is_empty() {
        return field;
    }
    let omega = angular_frequencies(field.len(), field.sample_rate_ghz);
    let op: Vec<Complex64> = omega
        .iter()
        .map(|w| Complex64::from_polar(1.0, -0.5 * rx.link_dispersion_ps2 * w * w))
        .collect();
    let spectrum = Spectrum::new(field.len());
    for pol in field.pols_mut() {
        spectrum.filter(pol, |k| op[k]);
    }
    field
}

/// RRC matched filter and symbol-time sampling, rescaled to constellation
/// units.
pub fn matched_filter_sample(field: &FieldWaveform, rx: &RxChain) -> Vec<Symbol4D> {
    let len = field.len();
    let sps = rx.samples_per_symbol;
    let fs = field.sample_rate_ghz;
    let spectrum = Spectrum::new(len);
    let mut f = field.clone();
    for pol in f.pols_mut() {
        spectrum.filter(pol, |k| {
            let freq = bin_frequency_ghz(k, len, fs);
            Complex64::new(rrc_response(freq, rx.symbol_rate_gbd, rx.rolloff), 0.0)
        });
    }
    let inv = 1.0 / rx.launch_amplitude;
    (0..len / sps)
        .map(|i| Symbol4D::new(f.x[i * sps] * inv, f.y[i * sps] * inv))
        .collect()
}
