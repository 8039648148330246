//! Counter-based random streams.
//!
//! Every experiment has one root seed. Work is cut into blocks and block `b` of
//! stratum `s` draws from the ChaCha8 stream `(s << 32) | b` of that seed, so
//! results are identical whatever the number of worker threads.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::math::{cos, sin, sqrt, TAU};
use crate::C64;

/// Number of samples drawn from one stream before moving to the next.
pub const BLOCK: usize = 1 << 15;

pub type Stream = ChaCha8Rng;

pub fn stream(seed: u64, id: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

pub fn stream_id(stratum: usize, block: usize) -> u64 {
    ((stratum as u64) << 32) | block as u64
}

/// Derive an independent root seed for a sub-experiment (splitmix64 finalizer).
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform in [0, 1) with 53 random bits.
#[inline]
pub fn uniform(rng: &mut Stream) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform in (0, 1].
#[inline]
pub fn uniform_left_open(rng: &mut Stream) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform angle in (-pi, pi].
#[inline]
pub fn angle(rng: &mut Stream) -> f64 {
    core::f64::consts::PI - TAU * uniform(rng)
}

/// Uniform point of the Euclidean disk D(0, r).
#[inline]
pub fn in_disk(rng: &mut Stream, r: f64) -> C64 {
    let rad = r * sqrt(uniform(rng));
    let t = angle(rng);
    C64::new(rad * cos(t), rad * sin(t))
}
