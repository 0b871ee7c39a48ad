//! Deterministic seed derivation.
//!
//! Every random stream in the crate is keyed by a master seed plus a short
//! path of integer tags (point index, simulation index, permutation index).
//! Streams never depend on scheduling, so results are identical for any
//! number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Tags separating the independent streams drawn inside one test or simulation.
pub mod tag {
    pub const DATA: u64 = 0x0D47A;
    pub const OUTLIERS: u64 = 0x0071E5;
    pub const TEST: u64 = 0x7E57;
    pub const PERMUTATION: u64 = 0x9E53;
    pub const TIES: u64 = 0x71E5;
    pub const TIES_X: u64 = 0x71E5_0001;
    pub const TIES_Y: u64 = 0x71E5_0002;
    pub const TIES_RAW_X: u64 = 0x71E5_0003;
    pub const TIES_RAW_Y: u64 = 0x71E5_0004;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from `master` and a path of tags.
pub fn derive(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix64(master), |acc, &t| {
        splitmix64(acc ^ splitmix64(t))
    })
}

pub fn rng(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rng_at(master: u64, path: &[u64]) -> StreamRng {
    rng(derive(master, path))
}
