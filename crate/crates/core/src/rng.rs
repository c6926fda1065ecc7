//! Reproducible noise streams.
//!
//! Every stream is a ChaCha8 keystream (a counter-based generator: output
//! block `k` is a pure function of the 256-bit key and the block counter).
//! The key for `(seed, channel, stream)` is built by feeding the three
//! integers through the SplitMix64 finalizer:
//!
//! ```text
//! base    = mix64(seed ^ mix64(channel.wrapping_mul(GOLDEN) ^ mix64(stream ^ STREAM_SALT)))
//! word[i] = mix64(base.wrapping_add((i + 1) * GOLDEN))      i = 0..4
//! key     = word[0] || word[1] || word[2] || word[3]         (little endian)
//! ```
//!
//! Uniforms take the top 53 bits of each 64-bit output; Gaussians come from
//! the Marsaglia polar method, which consumes pairs of uniforms on (-1, 1)
//! and emits two variates per accepted pair. Only IEEE-754 basic operations,
//! `sqrt` and `ln` are involved.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// Channel id shared by every `Driver::Shared` noise channel.
pub const COMMON_CHANNEL: u64 = 0;

/// SplitMix64 finalizer (Stafford variant 13).
pub fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// 256-bit ChaCha key for a `(seed, channel, stream)` triple.
pub fn stream_key(seed: u64, channel: u64, stream: u64) -> [u8; 32] {
    let base = mix64(seed ^ mix64(channel.wrapping_mul(GOLDEN) ^ mix64(stream ^ STREAM_SALT)));
    let mut key = [0u8; 32];
    for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
        let word = mix64(base.wrapping_add((i as u64 + 1).wrapping_mul(GOLDEN)));
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    key
}

/// Seed of the `k`-th ensemble member derived from a master seed.
pub fn member_seed(master: u64, k: u64) -> u64 {
    mix64(master ^ mix64(k.wrapping_add(1).wrapping_mul(GOLDEN)))
}

pub struct NoiseStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NoiseStream {
    pub fn new(seed: u64, channel: u64, stream: u64) -> Self {
        Self { rng: ChaCha8Rng::from_seed(stream_key(seed, channel, stream)), spare: None }
    }

    /// Uniform on the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}
