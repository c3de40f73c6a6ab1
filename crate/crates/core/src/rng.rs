//! The RNG contract shared by graph sampling, baseline strategies and the
//! experiment harness.
//!
//! * Generator: ChaCha with 8 rounds (`rand_chacha::ChaCha8Rng`), seeded with
//!   `SeedableRng::seed_from_u64`. Its output stream is fixed by the ChaCha
//!   specification and identical on every platform.
//! * Uniform reals: `(next_u64() >> 11) * 2^-53`, one 64-bit draw each.
//! * Splitting: child seeds are derived with the SplitMix64 finaliser folded
//!   over the parent seed and a list of integer labels (see [`derive_seed`]),
//!   so every (master seed, trial, k) cell owns an independent stream.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type GameRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> GameRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `master` and a sequence of labels.
pub fn derive_seed(master: u64, labels: &[u64]) -> u64 {
    labels
        .iter()
        .fold(splitmix64(master), |acc, &l| splitmix64(acc ^ splitmix64(l)))
}

/// Uniform draw in `[0, 1)` consuming exactly one `u64`.
#[inline]
pub fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in `0..len` (rejection-free multiply-shift; `len > 0`).
#[inline]
pub fn below<R: RngCore + ?Sized>(rng: &mut R, len: usize) -> usize {
    debug_assert!(len > 0);
    ((rng.next_u64() as u128 * len as u128) >> 64) as usize
}
