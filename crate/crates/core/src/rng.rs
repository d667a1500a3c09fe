use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The RNG used throughout the crate. ChaCha8 streams are portable and
/// reproducible across platforms for a given seed.
pub type Rng64 = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent stream seed from a master seed and a coordinate
/// pair (e.g. generation and individual index). SplitMix64 finalizer.
pub fn derive_stream_seed(master: u64, a: u64, b: u64) -> u64 {
    let mut z = master
        ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F).rotate_left(31);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
