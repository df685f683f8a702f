//! Counter-based seed derivation.
//!
//! Every random quantity of a run is drawn from `ChaCha8Rng::seed_from_u64(master)`
//! switched to the stream
//!
//! ```text
//! purpose << 56 | channel << 44 | block << 16 | span
//! ```
//!
//! with 8, 12, 28 and 16 bits per field. Any (purpose, channel, block, span)
//! cell can therefore be regenerated on its own, independent of the worker
//! count and of the order in which work is scheduled. The launch power and
//! the scheme are deliberately not part of the stream id: all points of a
//! sweep share common random numbers.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    /// Information bits or MB amplitudes of a block.
    Data = 1,
    /// ASE of one amplifier.
    Ase = 2,
    /// Seeds of the transform books.
    Book = 3,
    /// Unselected blocks used to calibrate the metric's launch scale.
    Calibration = 4,
}

const CHANNEL_BITS: u32 = 12;
const BLOCK_BITS: u32 = 28;
const SPAN_BITS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedTree {
    master: u64,
}

impl SeedTree {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    pub fn stream_id(purpose: Purpose, channel: usize, block: usize, span: usize) -> u64 {
        assert!(channel < 1 << CHANNEL_BITS, "channel index {channel} out of range");
        assert!(block < 1 << BLOCK_BITS, "block index {block} out of range");
        assert!(span < 1 << SPAN_BITS, "span index {span} out of range");
        (purpose as u64) << (CHANNEL_BITS + BLOCK_BITS + SPAN_BITS)
            | (channel as u64) << (BLOCK_BITS + SPAN_BITS)
            | (block as u64) << SPAN_BITS
            | span as u64
    }

    pub fn rng(&self, purpose: Purpose, channel: usize, block: usize, span: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(Self::stream_id(purpose, channel, block, span));
        rng
    }

    /// Seed of the receiver-known transform book.
    pub fn book_seed(&self) -> u64 {
        self.rng(Purpose::Book, 0, 0, 0).next_u64()
    }
}
