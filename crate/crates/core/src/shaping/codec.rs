use super::ess::EssTrellis;
use super::pas::{pas_demap_hard, pas_map, Symbol4D};
use crate::error::{Error, Result};
use crate::shaping::AmplitudeAlphabet;

/// Bits-to-symbols chain of a PAS transmitter: one or more ESS blocks
/// provide the amplitudes of `n_symbols` 4D symbols and the trailing
/// `4 * n_symbols` bits provide the signs.
#[derive(Debug, Clone)]
pub struct PasCodec {
    trellis: EssTrellis,
    alphabet: AmplitudeAlphabet,
    n_symbols: usize,
    dm_blocks: usize,
}

impl PasCodec {
    pub fn new(trellis: EssTrellis, alphabet: AmplitudeAlphabet, n_symbols: usize) -> Result<Self> {
        let amps = 4 * n_symbols;
        let n = trellis.blocklength();
        if amps % n != 0 {
            return Err(Error::config(format!(
                "{amps} amplitudes per selection block is not a multiple of the DM blocklength {n}"
            )));
        }
        Ok(Self {
            dm_blocks: amps / n,
            trellis,
            alphabet,
            n_symbols,
        })
    }

    pub fn trellis(&self) -> &EssTrellis {
        &self.trellis
    }

    pub fn n_symbols(&self) -> usize {
        self.n_symbols
    }

    pub fn dm_blocks(&self) -> usize {
        self.dm_blocks
    }

    /// Amplitude (DM) bits per selection block.
    pub fn dm_bits(&self) -> usize {
        self.dm_blocks * self.trellis.input_bits()
    }

    /// Total input bits per selection block, DM bits followed by sign bits.
    pub fn input_bits(&self) -> usize {
        self.dm_bits() + 4 * self.n_symbols
    }

    pub fn encode(&self, bits: &[bool]) -> Result<Vec<Symbol4D>> {
        if bits.len() != self.input_bits() {
            return Err(Error::LengthMismatch {
                what: "PAS input bits",
                expected: self.input_bits(),
                actual: bits.len(),
            });
        }
        let (dm, signs) = bits.split_at(self.dm_bits());
        let mut amps = Vec::with_capacity(4 * self.n_symbols);
        for chunk in dm.chunks_exact(self.trellis.input_bits().max(1)) {
            amps.extend(self.trellis.encode(chunk)?);
        }
        if self.trellis.input_bits() == 0 {
            for _ in 0..self.dm_blocks {
                amps.extend(self.trellis.encode(&[])?);
            }
        }
        pas_map(&amps, signs)
    }

    pub fn decode(&self, symbols: &[Symbol4D]) -> Result<Vec<bool>> {
        if symbols.len() != self.n_symbols {
            return Err(Error::LengthMismatch {
                what: "PAS symbol block",
                expected: self.n_symbols,
                actual: symbols.len(),
            });
        }
        let (amps, signs) = pas_demap_hard(symbols, &self.alphabet);
        let mut bits = Vec::with_capacity(self.input_bits());
        for block in amps.chunks_exact(self.trellis.blocklength()) {
            bits.extend(self.trellis.decode(block)?);
        }
        bits.extend(signs);
        Ok(bits)
    }
}
