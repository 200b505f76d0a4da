//! Named, reproducible random sub-streams derived from one root seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a sub-seed from `root`, a stream name and a list of indices.
///
/// The same `(root, name, indices)` always yields the same value, and
/// distinct names or indices give statistically independent streams.
pub fn derive_seed(root: u64, name: &str, indices: &[u64]) -> u64 {
    let mut h = splitmix64(root);
    for b in name.bytes() {
        h = splitmix64(h ^ u64::from(b));
    }
    for &i in indices {
        h = splitmix64(h ^ splitmix64(i.wrapping_add(0x5851_f42d_4c95_7f2d)));
    }
    h
}

pub fn stream(root: u64, name: &str, indices: &[u64]) -> Rng {
    Rng::seed_from_u64(derive_seed(root, name, indices))
}
