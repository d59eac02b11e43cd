//! Deterministic pseudo-random numbers.
//!
//! Everything seeded in this crate (weight init, corpus shuffles, ensemble
//! member seeds) goes through SplitMix64 so that a 64-bit seed fully
//! determines the result on every platform. SplitMix64 is the generator from
//! Steele, Lea and Flood's "Fast splittable pseudorandom number generators";
//! it is tiny, has a full 2^64 period, and passes BigCrush.

/// SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1): top 53 bits scaled by 2^-53.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in [0, n). Uses rejection to avoid modulo bias.
    pub fn next_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }
}

/// One-shot avalanche of a seed, used to decorrelate derived seeds.
pub fn mix(seed: u64) -> u64 {
    SplitMix64::new(seed).next_u64()
}

/// Seed for ensemble member `index` derived from `base`.
///
/// The multiplier is the SplitMix64 golden-ratio increment; combined with the
/// avalanche this keeps member streams disjoint even for adjacent bases.
pub fn member_seed(base: u64, index: u64) -> u64 {
    mix(base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(1))
}
