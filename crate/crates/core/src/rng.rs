//! Seeded random streams.
//!
//! All stochastic routines take an explicit `u64` seed and build a fresh
//! `ChaCha8Rng` from it, so identical seeds give bit-identical output on every
//! platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}
