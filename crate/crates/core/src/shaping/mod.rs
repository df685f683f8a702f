//! Probabilistic amplitude shaping: the enumerative sphere shaping (ESS)
//! matcher, the i.i.d. Maxwell-Boltzmann baseline, and the PAS mapping
//! between amplitudes, sign bits and dual-polarization QAM symbols.

mod alphabet;
mod codec;
mod ess;
mod mb;
mod pas;

pub use alphabet::{AmplitudeAlphabet, ShapingConfig};
pub use codec::PasCodec;
pub use ess::{bits_to_index, ess_build_trellis, ess_choose_emax, index_to_bits, EssTrellis};
pub use mb::{entropy_bits, mb_fit, mb_sample, MbDistribution};
pub use pas::{pas_demap_hard, pas_map, Symbol4D};
