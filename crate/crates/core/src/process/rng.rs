//! Seed derivation and independent random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream carrying the return residuals.
pub const RETURN_STREAM: u64 = 0;

/// First stream used for volatility or state noise; component `k` uses
/// `VOL_STREAM + k`.
pub const VOL_STREAM: u64 = 1;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run` in an ensemble driven by `master`.
pub fn sub_seed(master: u64, run: u64) -> u64 {
    mix64(mix64(master) ^ mix64(run.wrapping_add(0x632B_E59B_D9B4_E019)))
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
