//! Seed derivation and generator construction.
//!
//! Every random draw in the crate comes from a ChaCha8 generator keyed by a
//! 64-bit seed and a stream id, so independent consumers of one seed never
//! share a bit stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream ids for the consumers of a trial seed.
pub mod stream {
    pub const RESPONSES: u64 = 1;
    pub const TRUTH: u64 = 2;
    pub const SPLIT: u64 = 3;
    pub const ESTIMATOR: u64 = 4;
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `parts` into `base` one word at a time.
///
/// `mix_seed(b, &[s, t])` is the per-trial seed used by the harness for sweep
/// index `s` and trial index `t`. Each word is absorbed through a full
/// SplitMix64 round, so appending sweep points never changes earlier seeds.
pub fn mix_seed(base: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(base), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn generator(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
