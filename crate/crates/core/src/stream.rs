//! Counter-based stream splitting.
//!
//! Every consumer of randomness (world construction, sampling, Monte-Carlo
//! evaluation, each trial of each experiment) gets its own generator whose
//! seed is derived from a root seed and a *path* of context words, e.g.
//! `[experiment, m, trial, purpose]`. The derivation chains the SplitMix64
//! finalizer, which is bijective per step and well spread, so distinct
//! paths give independent-looking streams and adding trials or experiments
//! never perturbs the streams of existing ones.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `root` and a path of context words.
pub fn derive_seed(root: u64, path: &[u64]) -> u64 {
    let mut s = mix(root ^ 0x6A09_E667_F3BC_C909);
    for &word in path {
        s = mix(s ^ mix(word));
    }
    s
}

/// A generator for the stream identified by `path` under `root`.
pub fn rng(root: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(root, path))
}

/// Purpose tags used as the last path word, so that sibling streams of one
/// trial (world build, data draw, evaluation) never coincide.
pub mod tag {
    pub const WORLD: u64 = 0x57;
    pub const DATA: u64 = 0xDA;
    pub const EVAL: u64 = 0xE7;
    pub const TARGET: u64 = 0x7A;
}
