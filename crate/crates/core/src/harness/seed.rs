//! Counter-based seed splitting.
//!
//! Every random draw descends from the master seed through
//! `derive_seed(master, stream, index)`: the three words are mixed with
//! SplitMix64, so the seed of a realization depends only on its coordinates
//! and never on the order in which workers pick up jobs.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// One SplitMix64 output for state `x`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of realization `index` on sweep axis point `stream`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index.wrapping_mul(GOLDEN))
}
