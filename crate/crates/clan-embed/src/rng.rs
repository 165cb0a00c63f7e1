//! Seeded randomness: one 64-bit seed, independent numbered streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The `stream`-th independent generator derived from `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
