//! Deterministic, splittable random streams.
//!
//! Every random draw in the crate comes from a ChaCha stream keyed by a user
//! seed plus a tag and an index, so a result depends only on its coordinates
//! and never on scheduling order.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::math;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A stream for `(seed, tag, index)`. Distinct coordinates give independent
/// streams.
pub fn stream(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let words = [
        splitmix(seed),
        splitmix(seed ^ 0x5bd1_e995),
        splitmix(tag.wrapping_mul(0x2545_f491_4f6c_dd1d)),
        splitmix(!seed ^ tag),
    ];
    for (chunk, w) in key.chunks_exact_mut(8).zip(words) {
        chunk.copy_from_slice(&w.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Uniform draw in `[0, 1)` with 53 bits of precision.
#[inline]
pub fn unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in `0..n`.
#[inline]
pub fn index(rng: &mut impl RngCore, n: usize) -> usize {
    debug_assert!(n > 0);
    ((rng.next_u64() as u128 * n as u128) >> 64) as usize
}

/// Draw from a mass vector by inversion.
pub fn categorical(rng: &mut impl RngCore, mass: &[f64]) -> usize {
    let u = unit(rng);
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in mass.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = i;
            if u < acc {
                return i;
            }
        }
    }
    last
}

/// Fill `out` with a flat Dirichlet(1, ..., 1) sample.
pub fn dirichlet_flat(rng: &mut impl RngCore, out: &mut [f64]) {
    let mut total = 0.0;
    for v in out.iter_mut() {
        // 1 - unit lies in (0, 1], so the log is finite.
        *v = -math::ln(1.0 - unit(rng));
        total += *v;
    }
    for v in out.iter_mut() {
        *v /= total;
    }
}
