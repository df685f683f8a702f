//! Fixtures shared by the criterion benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqsel::shaping::{AmplitudeAlphabet, EssTrellis, PasCodec, ShapingConfig, Symbol4D};

/// Desk-scale codec: rate 1.3, 256 amplitudes, 64 4D symbols per block.
pub fn desk_codec() -> PasCodec {
    let cfg = ShapingConfig::new(1.3, 256, AmplitudeAlphabet::qam64()).expect("config");
    let trellis = EssTrellis::for_config(&cfg).expect("trellis");
    PasCodec::new(trellis, cfg.alphabet, 64).expect("codec")
}

pub fn random_bits(seed: u64, n: usize) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random()).collect()
}

/// Uniform 64-QAM per polarisation.
pub fn qam64_block(seed: u64, n: usize) -> Vec<Symbol4D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Symbol4D::from_rails([0; 4].map(|_: u8| (2 * rng.random_range(0..8) - 7) as f64)))
        .collect()
}
