//! Root-raised-cosine pulse shaping.
//!
//! Blocks are processed cyclically, so the pulse is applied exactly in the
//! frequency domain instead of through a truncated FIR.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::fft::{bin_frequency_ghz, Spectrum};
use super::params::WdmConfig;
use super::waveform::FieldWaveform;
use crate::shaping::Symbol4D;

/// Square root of the raised-cosine spectrum, normalized to 1 at DC.
pub fn rrc_response(freq_ghz: f64, symbol_rate_gbd: f64, rolloff: f64) -> f64 {
    let f = freq_ghz.abs();
    let f1 = symbol_rate_gbd * (1.0 - rolloff) / 2.0;
    let f2 = symbol_rate_gbd * (1.0 + rolloff) / 2.0;
    if f <= f1 {
        1.0
    } else if f >= f2 {
        0.0
    } else {
        let rc = 0.5 * (1.0 + (PI / (rolloff * symbol_rate_gbd) * (f - f1)).cos());
        rc.sqrt()
    }
}

/// Amplitude scale mapping constellation units to sqrt(W) so that symbols
/// of mean 4D energy `reference_energy` are launched at the configured power.
pub fn launch_amplitude(wdm: &WdmConfig, reference_energy: f64) -> f64 {
    (wdm.launch_power_w() / reference_energy).sqrt()
}

/// Upsamples and RRC-filters a block of 4D symbols. The resulting waveform
/// has mean power `amplitude^2 * mean(|s|^2)`.
pub fn rrc_modulate(symbols: &[Symbol4D], wdm: &WdmConfig, amplitude: f64) -> FieldWaveform {
    let sps = wdm.samples_per_symbol;
    let len = symbols.len() * sps;
    let fs = wdm.sample_rate_ghz();
    let mut field = FieldWaveform::zeros(len, fs);
    for (i, s) in symbols.iter().enumerate() {
        field.x[i * sps] = s.x;
        field.y[i * sps] = s.y;
    }
    let spectrum = Spectrum::new(len);
    let gain = amplitude * sps as f64;
    let response: Vec<Complex64> = (0..len)
        .map(|k| {
            let h = rrc_response(bin_frequency_ghz(k, len, fs), wdm.symbol_rate_gbd, wdm.rolloff);
            Complex64::new(gain * h, 0.0)
        })
        .collect();
    for pol in field.pols_mut() {
        spectrum.filter(pol, |k| response[k]);
    }
    field
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn wdm() -> WdmConfig {
        WdmConfig {
            n_channels: 1,
            symbol_rate_gbd: 46.5,
            spacing_ghz: 50.0,
            rolloff: 0.05,
            samples_per_symbol: 4,
            launch_power_dbm: 0.0,
        }
    }

    /// Closed-form RRC impulse response with `h(0) = 1 - b + 4b/pi`, time in
    /// symbol periods.
    fn rrc_time(t: f64, b: f64) -> f64 {
        if t.abs() < 1e-12 {
            return 1.0 - b + 4.0 * b / PI;
        }
        if ((4.0 * b * t).abs() - 1.0).abs() < 1e-9 {
            return b / 2f64.sqrt()
                * ((1.0 + 2.0 / PI) * (PI / (4.0 * b)).sin()
                    + (1.0 - 2.0 / PI) * (PI / (4.0 * b)).cos());
        }
        ((PI * t * (1.0 - b)).sin() + 4.0 * b * t * (PI * t * (1.0 + b)).cos())
            / (PI * t * (1.0 - (4.0 * b * t).powi(2)))
    }

    #[test]
    fn pulse_matches_closed_form() {
        let n = 1024;
        let cfg = wdm();
        let mut symbols = vec![Symbol4D::default(); n];
        symbols[0].x = Complex64::new(1.0, 0.0);
        let f = rrc_modulate(&symbols, &cfg, 1.0);
        let sps = cfg.samples_per_symbol as f64;
        let peak = rrc_time(0.0, cfg.rolloff);
        // cyclic waveform: compare within +-64 symbols of the pulse centre
        for j in (0..64 * 4).chain(f.len() - 64 * 4..f.len()) {
            let t = if j < f.len() / 2 { j as f64 } else { j as f64 - f.len() as f64 } / sps;
            let expected = rrc_time(t, cfg.rolloff);
            let got = f.x[j].re;
            assert!((got - expected).abs() < 1e-3 * peak, "t={t}: {got} vs {expected}");
            assert!(f.y[j].norm() == 0.0);
        }
    }

    #[test]
    fn pulse_spectrum_is_rrc() {
        let cfg = wdm();
        let mut symbols = vec![Symbol4D::default(); 256];
        symbols[0].x = Complex64::new(1.0, 0.0);
        let mut f = rrc_modulate(&symbols, &cfg, 1.0);
        let s = Spectrum::new(f.len());
        s.forward(&mut f.x);
        let fs = cfg.sample_rate_ghz();
        for (k, v) in f.x.iter().enumerate() {
            let freq = bin_frequency_ghz(k, f.len(), fs);
            // sps scaling cancels the zero-insertion
            let expected = rrc_response(freq, 46.5, 0.05) * 4.0;
            assert!((v.norm() - expected).abs() < 1e-3, "{freq}");
        }
    }

    #[test]
    fn launch_power_normalization() {
        let cfg = WdmConfig { launch_power_dbm: 3.0, ..wdm() };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let levels = [-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0];
        let symbols: Vec<Symbol4D> = (0..10_000)
            .map(|_| {
                let mut r = [0.0; 4];
                for v in &mut r {
                    *v = levels[rng.random_range(0..8)];
                }
                Symbol4D::from_rails(r)
            })
            .collect();
        let e: f64 = symbols.iter().map(Symbol4D::energy).sum::<f64>() / symbols.len() as f64;
        let f = rrc_modulate(&symbols, &cfg, launch_amplitude(&cfg, e));
        let db = 10.0 * (f.mean_power() / cfg.launch_power_w()).log10();
        assert!(db.abs() < 0.01, "{db}");
        assert_eq!(f, rrc_modulate(&symbols, &cfg, launch_amplitude(&cfg, e)));
    }
}
