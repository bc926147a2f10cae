//! Counter-based derivation of independent random streams.
//!
//! Every random draw in the crate comes from a stream keyed by
//! `(master seed, purpose, index...)`, so results never depend on how work is
//! scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// What a stream is used for. Distinct tags give unrelated streams for the
/// same master seed and index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Purpose {
    Holes = 0x686f_6c65,
    EdgePoints = 0x6564_6765,
    Replicate = 0x7265_706c,
    BranchingTrial = 0x6277_7472,
    Sweep = 0x7377_6570,
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes a master seed, a purpose tag and a path of indices into a seed.
pub fn derive_seed(master: u64, purpose: Purpose, path: &[u64]) -> u64 {
    let mut h = splitmix64(master ^ splitmix64(purpose as u64));
    for &i in path {
        h = splitmix64(h ^ splitmix64(i.wrapping_add(0x632b_e59b_d9b4_e019)));
    }
    h
}

pub fn stream(master: u64, purpose: Purpose, path: &[u64]) -> StreamRng {
    StreamRng::seed_from_u64(derive_seed(master, purpose, path))
}
