//! Seed handling. Every random choice in the crate comes from a ChaCha
//! stream whose seed is derived from one root seed, so runs are
//! reproducible from `(root seed, labels)` alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

pub type DetRng = ChaCha8Rng;

pub fn rng(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Child seed for stream `label`, item `index`.
pub fn derive_seed(root: u64, label: &str, index: u64) -> u64 {
    let tag = label
        .bytes()
        .fold(0xCBF2_9CE4_8422_2325u64, |h, b| {
            (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01B3)
        });
    splitmix64(splitmix64(root ^ tag).wrapping_add(index))
}

/// A positive rational `p/q` with `1 <= p <= max_num`, `1 <= q <= max_den`.
pub fn random_capacity<S: Scalar>(rng: &mut DetRng, max_num: i64, max_den: i64) -> S {
    let p = rng.gen_range(1..=max_num);
    let q = rng.gen_range(1..=max_den);
    S::from_ratio(p, q)
}
