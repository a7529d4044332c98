//! Deterministic random streams.
//!
//! Every Monte Carlo routine draws from ChaCha8 generators. A run is fixed by
//! a 64-bit seed; work is split into blocks of [`BLOCK_SIZE`] units and block
//! `b` uses the ChaCha stream `b` of the generator seeded with that seed, so
//! results never depend on how blocks are scheduled across threads.
//! Auxiliary draws (treatment assignments for diagnostics, interventional
//! mediator draws) use stream `b + AUX_STREAM_OFFSET`.
//!
//! Per-setting seeds in a grid sweep come from [`mix64`], the SplitMix64
//! finalizer applied to `seed ^ golden * (index + 1)`.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::math;

/// Units generated per independent stream.
pub const BLOCK_SIZE: u64 = 1 << 16;

/// Offset separating auxiliary streams from unit streams.
pub const AUX_STREAM_OFFSET: u64 = 1 << 62;

/// The generator used throughout the crate.
pub type Stream = ChaCha8Rng;

/// Fixed 64-bit mixing of a base seed with an index (SplitMix64 finalizer).
pub fn mix64(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ 0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream for block `block` of a run seeded with `seed`.
pub fn block_stream(seed: u64, block: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Auxiliary stream paired with block `block`.
pub fn aux_stream(seed: u64, block: u64) -> Stream {
    block_stream(seed, block.wrapping_add(AUX_STREAM_OFFSET))
}

/// Number of blocks covering `n` units and the length of block `b`.
pub fn block_count(n: u64) -> u64 {
    n.div_ceil(BLOCK_SIZE)
}

pub fn block_len(n: u64, block: u64) -> u64 {
    let start = block * BLOCK_SIZE;
    BLOCK_SIZE.min(n.saturating_sub(start))
}

/// Uniform on the open interval (0, 1) with 53 bits of resolution.
#[inline]
pub fn uniform_open01<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Standard logistic draw by inverse CDF.
#[inline]
pub fn standard_logistic<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    let u = uniform_open01(rng);
    math::ln(u / (1.0 - u))
}

#[inline]
pub fn normal<R: Rng + ?Sized>(rng: &mut R, mean: f64, sd: f64) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    mean + sd * z
}

/// Bernoulli(p) by threshold comparison of a uniform.
#[inline]
pub fn bernoulli<R: RngCore + ?Sized>(rng: &mut R, p: f64) -> bool {
    uniform_open01(rng) < p
}
