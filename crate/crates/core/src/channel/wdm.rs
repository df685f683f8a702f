use std::f64::consts::PI;

use num_complex::Complex64;

use super::fft::{bin_frequency_ghz, Spectrum};
use super::params::WdmConfig;
use super::waveform::FieldWaveform;
use crate::error::{Error, Result};

/// FFT bin of channel `k`'s carrier for a cyclic block of `len` samples.
///
/// Carriers are snapped to the bin grid so that the multiplexed block stays
/// periodic; the realized spacing differs from nominal by at most half a bin.
pub fn carrier_bin(wdm: &WdmConfig, k: usize, len: usize) -> i64 {
    let bin = wdm.sample_rate_ghz() / len as f64;
    (wdm.carrier_offset_ghz(k) / bin).round() as i64
}

fn check_grid(wdm: &WdmConfig, len: usize) -> Result<()> {
    let fs = wdm.sample_rate_ghz();
    let bin = fs / len as f64;
    let half_bw = wdm.bandwidth_ghz() / 2.0;
    if wdm.n_channels > 1 {
        let step = carrier_bin(wdm, 1, len) - carrier_bin(wdm, 0, len);
        if (step as f64) * bin < wdm.bandwidth_ghz() {
            return Err(Error::config(format!(
                "block of {len} samples too short: realized spacing {:.3} GHz overlaps channels",
                step as f64 * bin
            )));
        }
    }
    let edge = carrier_bin(wdm, wdm.n_channels - 1, len) as f64 * bin + half_bw;
    if edge > fs / 2.0 {
        return Err(Error::Aliasing(format!(
            "WDM grid edge at {edge:.2} GHz exceeds Nyquist {:.2} GHz",
            fs / 2.0
        )));
    }
    Ok(())
}

fn shift(samples: &mut [Complex64], bins: i64) {
    if bins == 0 {
        return;
    }
    let n = samples.len();
    for (j, v) in samples.iter_mut().enumerate() {
        let phase = 2.0 * PI * ((bins * j as i64).rem_euclid(n as i64)) as f64 / n as f64;
        *v *= Complex64::from_polar(1.0, phase);
    }
}

/// Frequency-multiplexes the channels onto the grid centered at baseband.
pub fn wdm_mux(channels: &[FieldWaveform], wdm: &WdmConfig) -> Result<FieldWaveform> {
    if channels.len() != wdm.n_channels {
        return Err(Error::LengthMismatch {
            what: "WDM channels",
            expected: wdm.n_channels,
            actual: channels.len(),
        });
    }
    let len = channels[0].len();
    let fs = channels[0].sample_rate_ghz;
    if channels.iter().any(|c| c.len() != len || c.sample_rate_ghz != fs) {
        return Err(Error::config("WDM channels differ in length or sample rate"));
    }
    if channels.len() == 1 {
        return Ok(channels[0].clone());
    }
    check_grid(wdm, len)?;
    let mut out = FieldWaveform::zeros(len, fs);
    for (k, ch) in channels.iter().enumerate() {
        let bins = carrier_bin(wdm, k, len);
        let mut c = ch.clone();
        shift(&mut c.x, bins);
        shift(&mut c.y, bins);
        for (o, v) in out.x.iter_mut().zip(&c.x) {
            *o += v;
        }
        for (o, v) in out.y.iter_mut().zip(&c.y) {
            *o += v;
        }
    }
    Ok(out)
}

/// Shifts channel `k` to baseband and applies a brick-wall filter of one
/// channel spacing.
pub fn wdm_demux(field: &FieldWaveform, k: usize, wdm: &WdmConfig) -> Result<FieldWaveform> {
    if k >= wdm.n_channels {
        return Err(Error::config(format!("channel {k} outside the {}-channel grid", wdm.n_channels)));
    }
    let mut out = field.clone();
    if wdm.n_channels == 1 {
        return Ok(out);
    }
    let len = field.len();
    check_grid(wdm, len)?;
    let bins = carrier_bin(wdm, k, len);
    let fs = field.sample_rate_ghz;
    let half = wdm.spacing_ghz / 2.0;
    let spectrum = Spectrum::new(len);
    for pol in out.pols_mut() {
        shift(pol, -bins);
        spectrum.filter(pol, |b| {
            if bin_frequency_ghz(b, len, fs).abs() <= half {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        });
    }
    Ok(out)
}
