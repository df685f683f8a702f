use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::params::{AmplifierParams, FiberParams};
use super::waveform::FieldWaveform;

/// Planck constant in J s.
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Gain that exactly offsets one span's loss.
pub fn span_gain_db(fiber: &FiberParams) -> f64 {
    fiber.alpha_db_per_km * fiber.span_length_km
}

/// Amplifies by `gain_db` and adds ASE with one-sided PSD
/// `(G - 1) h nu n_sp` per polarization over the simulation bandwidth.
pub fn edfa<R: Rng + ?Sized>(
    mut field: FieldWaveform,
    gain_db: f64,
    amp: &AmplifierParams,
    rng: &mut R,
) -> FieldWaveform {
    let g = 10f64.powf(gain_db / 10.0);
    field.scale(g.sqrt());
    if amp.noiseless {
        return field;
    }
    let psd = (g - 1.0) * PLANCK * amp.center_frequency_thz * 1e12 * amp.n_sp();
    let variance = psd * field.sample_rate_ghz * 1e9;
    let sigma = (variance / 2.0).sqrt();
    for pol in field.pols_mut() {
        for v in pol.iter_mut() {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            v.re += sigma * re;
            v.im += sigma * im;
        }
    }
    field
}
