//! Coherent receiver chain and bit-wise achievable information rate.

mod air;
mod chain;
mod phase;
mod se;

pub use air::{air_bitwise, air_bitwise_block_rates, air_bitwise_blocked, mi_symbolwise, AirResult, SymbolPrior};
pub use chain::{cdc, matched_filter_sample, RxChain};
pub use phase::{mean_phase_comp, mean_phase_estimate};
pub use se::{se_from_air, se_from_bits, Overhead};
