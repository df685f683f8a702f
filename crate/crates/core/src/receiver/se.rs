use crate::channel::WdmConfig;

use super::air::AirResult;

/// Rate overhead charged against the AIR before converting to spectral
/// efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overhead {
    /// Bits per 4D symbol subtracted from the AIR (DM rate loss).
    pub bits_per_4d: f64,
    /// Data-carrying time slots per block.
    pub payload_slots: usize,
    /// Transmitted time slots per block, including pilot symbols.
    pub total_slots: usize,
}

impl Overhead {
    pub fn none() -> Self {
        Self {
            bits_per_4d: 0.0,
            payload_slots: 1,
            total_slots: 1,
        }
    }

    pub fn bits(bits_per_4d: f64) -> Self {
        Self {
            bits_per_4d,
            ..Self::none()
        }
    }

    pub fn time_slots(payload: usize, total: usize) -> Self {
        Self {
            bits_per_4d: 0.0,
            payload_slots: payload,
            total_slots: total,
        }
    }

    pub fn slot_factor(&self) -> f64 {
        self.payload_slots as f64 / self.total_slots as f64
    }
}

/// Spectral efficiency in bit/s/Hz of one WDM channel.
pub fn se_from_air(air: &AirResult, wdm: &WdmConfig, overhead: Overhead) -> f64 {
    se_from_bits(air.air_bits_per_4d, wdm, overhead)
}

/// As [`se_from_air`] for a bare rate in bits per 4D symbol.
pub fn se_from_bits(air_bits_per_4d: f64, wdm: &WdmConfig, overhead: Overhead) -> f64 {
    (air_bits_per_4d - overhead.bits_per_4d).max(0.0) * overhead.slot_factor() * wdm.symbol_rate_gbd
        / wdm.spacing_ghz
}

#[cfg(test)]
mod tests {
    use super::*;

    fn air(v: f64) -> AirResult {
        AirResult {
            air_bits_per_4d: v,
            noise_variance_est: 0.0,
            n_symbols: 1000,
            ci95: 0.0,
        }
    }

    fn wdm() -> WdmConfig {
        WdmConfig {
            n_channels: 5,
            symbol_rate_gbd: 46.5,
            spacing_ghz: 50.0,
            rolloff: 0.05,
            samples_per_symbol: 16,
            launch_power_dbm: 0.0,
        }
    }

    #[test]
    fn arithmetic() {
        assert!((se_from_air(&air(9.2), &wdm(), Overhead::none()) - 8.556).abs() < 1e-12);
        let siss = se_from_air(&air(9.2), &wdm(), Overhead::time_slots(256, 258));
        assert!((siss - 8.556 * 256.0 / 258.0).abs() < 1e-12);
        assert_eq!(se_from_air(&air(0.1), &wdm(), Overhead::bits(0.5)), 0.0);
    }
}
