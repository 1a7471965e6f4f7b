//! Seeded RNG streams.
//!
//! Every stochastic operation takes an explicit stream so results are a pure
//! function of the seed. Substreams are derived by mixing a stream id into
//! the base seed, so samples of a batch can be processed in any order (or in
//! parallel) without changing their draws.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Deterministic RNG stream used throughout the crate.
pub type Stream = ChaCha12Rng;

/// Root stream for a seed.
pub fn stream(seed: u64) -> Stream {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Substream `id` of `seed`, independent of every other id.
pub fn substream(seed: u64, id: u64) -> Stream {
    stream(derive_seed(seed, id))
}

/// Mix a stream id into a base seed (splitmix64 finalizer).
pub fn derive_seed(seed: u64, id: u64) -> u64 {
    let mut z = seed ^ id.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
