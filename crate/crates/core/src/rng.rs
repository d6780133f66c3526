//! Stateless counter-based pseudorandomness.
//!
//! Schedules and beacon streams must be evaluable at an arbitrary slot
//! without replaying a stream, so per-slot values are derived by mixing
//! `(seed, counter)` rather than by advancing generator state.

/// SplitMix64 finalizer; full-period bijection on `u64`.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a seed with a counter into a uniform-looking 64-bit value.
pub(crate) fn mix2(seed: u64, counter: u64) -> u64 {
    mix64(seed ^ mix64(counter))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mix2_is_deterministic() {
        assert_eq!(mix2(7, 42), mix2(7, 42));
        assert_ne!(mix2(7, 42), mix2(7, 43));
        assert_ne!(mix2(7, 42), mix2(8, 42));
    }

    #[test]
    fn mix64_spreads_small_inputs() {
        let a = mix64(0);
        let b = mix64(1);
        assert_ne!(a, b);
        // Neighboring counters should differ in roughly half the bits.
        let d = (mix64(100) ^ mix64(101)).count_ones();
        assert!((16..=48).contains(&d), "poor diffusion: {d} bits");
    }
}
