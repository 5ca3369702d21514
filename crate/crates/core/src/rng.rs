//! Small deterministic generator for reproducible corpora.
//!
//! Reports must be byte-identical across runs and platforms for a fixed
//! seed, so we pin the generator rather than depend on an external crate
//! whose stream may change between versions. SplitMix64 is enough for
//! test-fixture noise; it is not a cryptographic generator.

/// SplitMix64 stream.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (-1, 1).
    pub fn next_signed(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }

    /// Uniform integer in [0, bound).
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        // Modulo bias is irrelevant for fixture generation.
        self.next_u64() % bound
    }
}
