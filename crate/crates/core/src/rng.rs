//! Reproducible random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A `(seed, stream)` pair naming an independent, reproducible random sequence.
///
/// Two streams with the same seed but different stream ids never share draws,
/// so concurrent samplers (one per fold, one per epoch) can be derived from a
/// single run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Derive a child stream; used to give each fold/epoch/batch its own draws.
    pub fn derive(&self, tag: u64) -> Self {
        // splitmix64 finaliser keeps derived ids well spread.
        let mut z = self
            .stream
            .wrapping_add(tag.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Self {
            seed: self.seed,
            stream: z ^ (z >> 31),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}
