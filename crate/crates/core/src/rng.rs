//! Seed plumbing.
//!
//! One global seed feeds every stochastic component through named
//! sub-streams, so enabling an extra metric never shifts another metric's
//! draws. Per-item draws (per node, per trial, per edge) are counter-based:
//! they depend only on the key, never on iteration order or thread count.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finaliser.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the sub-stream `name` of `seed`.
pub fn substream(seed: u64, name: &str) -> u64 {
    // FNV-1a over the name, then mixed with the parent seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    mix64(seed ^ mix64(h))
}

/// Generator for a named sub-stream.
pub fn stream_rng(seed: u64, name: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(substream(seed, name))
}

/// Uniform draw in the open interval (0, 1) keyed by `(seed, index)`.
pub fn keyed_open01(seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.sample(Open01)
}

/// Uniform draw in [0, 1) keyed by a tuple of counters. Cheap enough to call
/// once per edge per Monte Carlo trial.
#[inline]
pub fn keyed_unit(seed: u64, a: u64, b: u64, c: u64) -> f64 {
    let h = mix64(mix64(mix64(seed ^ a) ^ b) ^ c);
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
