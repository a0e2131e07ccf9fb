//! Seeded random streams.
//!
//! Every stream is ChaCha8 keyed by the 64-bit seed in little-endian order
//! followed by 24 zero bytes, with the ChaCha stream number selecting the
//! purpose. Derived draws use only `next_u64`, so the sequences are fixed by
//! the seed alone:
//!
//! * `below(n)` is `(next_u64 · n) >> 64`
//! * `unit()` is `(next_u64 >> 11) · 2⁻⁵³`

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Property values of the ground-truth resources.
pub const VALUES: u64 = 1;
/// Which advertised values are hidden.
pub const MASKING: u64 = 2;
/// Query properties, weights and requested values.
pub const QUERIES: u64 = 3;

pub struct Stream(ChaCha8Rng);

impl Stream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream);
        Stream(rng)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
