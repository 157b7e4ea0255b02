//! Seeded pseudo-random numbers for the reproducible parts of the pipeline.
//!
//! All randomized operations (k-means++ seeding, the random baseline, the
//! synthetic benchmark) draw from [`SplitMix64`], a 64-bit mix generator.
//! The output stream is a bit-exact function of the seed, so identical
//! seeds give identical results on every platform.

/// SplitMix64 generator (Steele, Lea & Flood's `splitmix64` finalizer).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)`. `bound` must be nonzero.
    pub fn next_below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        // Lemire's multiply-shift; bias is unmeasurable at our scales.
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    /// Standard normal draw via the Box-Muller transform.
    pub fn next_normal(&mut self) -> f64 {
        // u1 in (0, 1] so the log is finite.
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
    }
}

/// Stateless mix of a single value through one SplitMix64 step.
pub fn mix64(x: u64) -> u64 {
    SplitMix64::new(x).next_u64()
}

/// Per-word seed for operations that must not share a random stream
/// across words: removing or adding other words leaves the stream for
/// word `w` untouched.
pub fn word_seed(seed: u64, word: &str) -> u64 {
    mix64(seed ^ fnv1a_64(word.as_bytes(), FNV_OFFSET_BASIS))
}

pub const FNV_OFFSET_BASIS: u64 = 0xCBF2_9CE4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01B3;

/// FNV-1a 64-bit over `bytes`, continuing from state `h`.
pub fn fnv1a_64(bytes: &[u8], h: u64) -> u64 {
    let mut h = h;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}
