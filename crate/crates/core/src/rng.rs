//! Deterministic, splittable random streams.
//!
//! ChaCha is a counter-mode stream cipher, so every `(seed, stream)` pair
//! addresses an independent keystream. Substreams derived from one seed are
//! reproducible regardless of scheduling or of how many draws other streams
//! have consumed, which is what makes parallel sampling replayable.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

const F64_FROM_BITS: f64 = 1.0 / (1u64 << 53) as f64;

/// A seeded random stream. Not shareable across threads; derive one
/// substream per worker instead.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha12Rng,
    seed: u64,
    stream: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, seed, stream }
    }

    /// Independent stream sharing this one's seed. Draws from the parent do
    /// not affect the substream and vice versa.
    pub fn substream(&self, stream: u64) -> Self {
        Self::with_stream(self.seed, stream)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform draw in [0, 1) with 53 random mantissa bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * F64_FROM_BITS
    }
}
