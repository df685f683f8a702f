use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Positive amplitude levels of one real rail of the square QAM constellation.
///
/// Levels are stored as integers: every ASK rail used here is the odd-integer
/// lattice, which keeps block energies exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct AmplitudeAlphabet {
    levels: Vec<u32>,
}

impl AmplitudeAlphabet {
    pub fn new(levels: Vec<u32>) -> Result<Self> {
        if levels.is_empty() || !levels.len().is_power_of_two() {
            return Err(Error::config(format!(
                "alphabet size {} is not a power of two",
                levels.len()
            )));
        }
        if levels[0] == 0 {
            return Err(Error::config("amplitude levels must be positive"));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("amplitude levels must be strictly increasing"));
        }
        Ok(Self { levels })
    }

    /// The 8-ASK rail {1, 3, 5, 7} of 64QAM.
    pub fn qam64() -> Self {
        Self {
            levels: vec![1, 3, 5, 7],
        }
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn max_level(&self) -> u32 {
        *self.levels.last().expect("alphabet is non-empty")
    }

    /// Bits needed to label one amplitude (excluding the sign).
    pub fn bits_per_amplitude(&self) -> usize {
        self.levels.len().trailing_zeros() as usize
    }

    pub fn index_of(&self, level: u32) -> Option<usize> {
        self.levels.binary_search(&level).ok()
    }

    /// Index of the level closest to `value` (ties resolve to the lower level).
    pub fn nearest(&self, value: f64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, &l) in self.levels.iter().enumerate() {
            let d = (value - l as f64).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

impl Default for AmplitudeAlphabet {
    fn default() -> Self {
        Self::qam64()
    }
}

impl TryFrom<Vec<u32>> for AmplitudeAlphabet {
    type Error = Error;

    fn try_from(levels: Vec<u32>) -> Result<Self> {
        Self::new(levels)
    }
}

impl From<AmplitudeAlphabet> for Vec<u32> {
    fn from(a: AmplitudeAlphabet) -> Self {
        a.levels
    }
}

/// Rate and blocklength of the distribution matcher.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapingConfig {
    /// Target rate in bits per amplitude.
    pub rate: f64,
    /// Amplitudes per DM block.
    pub blocklength: usize,
    pub alphabet: AmplitudeAlphabet,
}

impl ShapingConfig {
    pub fn new(rate: f64, blocklength: usize, alphabet: AmplitudeAlphabet) -> Result<Self> {
        let max = alphabet.bits_per_amplitude() as f64;
        if !(rate > 0.0 && rate <= max) {
            return Err(Error::config(format!(
                "rate {rate} outside (0, {max}] bits/amplitude"
            )));
        }
        if blocklength == 0 {
            return Err(Error::config("blocklength must be at least 1"));
        }
        Ok(Self {
            rate,
            blocklength,
            alphabet,
        })
    }

    /// Input bits per block, `ceil(N * R)`, so the realized rate never falls
    /// short of the nominal one.
    pub fn input_bits(&self) -> usize {
        let exact = self.blocklength as f64 * self.rate;
        // guard against 1.3 * 10 = 13.000000000000002
        (exact - 1e-9).ceil().max(0.0) as usize
    }

    /// Same matcher carrying `extra` more input bits per block.
    pub fn with_extra_bits(&self, extra: usize) -> Result<Self> {
        let bits = self.input_bits() + extra;
        Self::new(
            bits as f64 / self.blocklength as f64,
            self.blocklength,
            self.alphabet.clone(),
        )
    }
}
