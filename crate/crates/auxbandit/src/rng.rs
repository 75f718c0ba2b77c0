//! Deterministic, splittable random streams.
//!
//! Every random draw in this crate comes from a stream addressed by a path of
//! integers: `(base seed, phase, replication, arm, epoch, ...)`. Two runs that
//! address the same path see the same bits, on any platform and regardless of
//! worker-thread count. This is what makes episodes reproducible and lets
//! several policies share one reward-noise table (common random numbers)
//! without ever consuming from each other's streams.

use rand_core::RngCore;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Purpose tag mixed into a stream path so that e.g. arrival generation and
/// reward noise can never collide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Phase {
    Arrivals = 0x41,
    AuxNoise = 0x42,
    RewardNoise = 0x43,
    Policy = 0x44,
    Click = 0x45,
    Outcome = 0x46,
    Sign = 0x47,
    Corpus = 0x48,
    Replication = 0x49,
}

/// Address of one random stream. Built by absorbing path components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StreamKey(u64);

impl StreamKey {
    pub fn root(seed: u64) -> Self {
        StreamKey(mix(seed ^ GOLDEN))
    }

    #[must_use]
    pub fn child(self, word: u64) -> Self {
        StreamKey(mix(self.0 ^ word.wrapping_mul(GOLDEN).wrapping_add(GOLDEN)))
    }

    #[must_use]
    pub fn phase(self, phase: Phase) -> Self {
        self.child(phase as u64)
    }

    /// Collapse the key into a plain seed, e.g. for deriving per-replication
    /// episode seeds.
    pub fn value(self) -> u64 {
        self.0
    }

    pub fn rng(self) -> StreamRng {
        StreamRng { state: self.0 }
    }
}

/// SplitMix64 sequence rooted at a [`StreamKey`].
#[derive(Clone, Debug)]
pub struct StreamRng {
    state: u64,
}

impl RngCore for StreamRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        rand_core::impls::fill_bytes_via_next(self, dest)
    }
}

/// Uniform draw in [0, 1) with 53-bit resolution.
pub fn uniform01(rng: &mut StreamRng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Bernoulli draw; p outside [0, 1] saturates.
pub fn bernoulli(rng: &mut StreamRng, p: f64) -> bool {
    if p >= 1.0 {
        true
    } else if p <= 0.0 {
        false
    } else {
        uniform01(rng) < p
    }
}
