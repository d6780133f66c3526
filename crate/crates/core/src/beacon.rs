//! One-bit shared-beacon rendezvous.
//!
//! Both agents observe the same uniformly random bit each slot. Grouping
//! slots into blocks of `2 * max(1, ceil_log2(n))` bits, the block's bits
//! seed a pseudorandom ranking of all channels, and each agent hops on the
//! channel of its set with the smallest rank for the whole block. The
//! agents share the beacon clock, so in any block where both are awake they
//! apply the same ranking, and they meet exactly when the minimum of the
//! union of their sets lands in the intersection.

use serde::Serialize;

use crate::rng::{mix2, mix64};
use crate::schedules::ChannelSet;
use crate::strings::ceil_log2;
use crate::{Error, Result};

/// Bits consumed per block for universe size `n`.
pub fn block_len(n: u32) -> u64 {
    2 * ceil_log2(n as u64).unwrap_or(0).max(1) as u64
}

/// Deterministic pseudorandom bit stream standing in for the shared beacon.
///
/// Bits are derived statelessly from `(seed, t)`, so overlapping reads are
/// always consistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BeaconStream {
    pub seed: u64,
}

impl BeaconStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    /// The beacon bit of absolute slot `t`.
    pub fn bit(&self, t: u64) -> bool {
        mix2(self.seed, t / 64) >> (t % 64) & 1 == 1
    }

    /// `count` consecutive bits starting at slot `t0`.
    pub fn bits(&self, t0: u64, count: u64) -> Vec<bool> {
        (t0..t0 + count).map(|t| self.bit(t)).collect()
    }

    /// The block's bits packed into a word, least significant bit first.
    pub fn block_seed(&self, block: u64, block_len: u64) -> u64 {
        assert!(block_len <= 64);
        let t0 = block * block_len;
        (0..block_len).fold(0u64, |acc, i| acc | (self.bit(t0 + i) as u64) << i)
    }
}

/// Rank of channel `a` under the block permutation seeded by `block_seed`.
///
/// The hash orders channels pseudorandomly; the channel id breaks ties, so
/// distinct channels always receive distinct ranks and the induced order is
/// a permutation of `[1, n]`.
pub fn perm_rank(block_seed: u64, a: u32) -> u128 {
    ((mix2(block_seed, mix64(a as u64)) as u128) << 32) | a as u128
}

/// The channel of `set` with the smallest rank in the given block.
pub fn block_argmin(set: &ChannelSet, block_seed: u64) -> u32 {
    set.channels()
        .iter()
        .copied()
        .min_by_key(|&a| perm_rank(block_seed, a))
        .unwrap()
}

/// Beacon-driven hopping schedule.
///
/// Slots are indexed by the shared beacon clock, not by the agent's wake-up:
/// a sleeping agent misses blocks but never disagrees with an awake one
/// about the current block's ranking.
#[derive(Debug, Clone)]
pub struct BeaconSchedule {
    set: ChannelSet,
    beacon: BeaconStream,
    block_len: u64,
}

impl BeaconSchedule {
    pub fn new(set: ChannelSet, beacon: BeaconStream) -> Self {
        let block_len = block_len(set.n());
        Self { set, beacon, block_len }
    }

    pub fn block_len(&self) -> u64 {
        self.block_len
    }

    /// Channel hopped in absolute slot `t`.
    pub fn channel_at(&self, t: u64) -> u32 {
        let block = t / self.block_len;
        block_argmin(&self.set, self.beacon.block_seed(block, self.block_len))
    }
}

/// Runs the beacon protocol for two overlapping sets and counts complete
/// shared blocks until their argmins coincide.
///
/// Wake offsets are quantized to blocks: a partially shared first block is
/// skipped. Returns the number of blocks examined including the successful
/// one, or `None` if `max_blocks` complete shared blocks all fail.
pub fn simulate_beacon(
    si: &ChannelSet,
    sj: &ChannelSet,
    seed: u64,
    max_blocks: u64,
    wake: (u64, u64),
) -> Result<Option<u64>> {
    if si.intersection(sj).is_empty() {
        return Err(Error::DisjointSets);
    }
    let beacon = BeaconStream::new(seed);
    let b = block_len(si.n().max(sj.n()));
    let first = wake.0.max(wake.1).div_ceil(b);
    for count in 0..max_blocks {
        let bs = beacon.block_seed(first + count, b);
        if block_argmin(si, bs) == block_argmin(sj, bs) {
            return Ok(Some(count + 1));
        }
    }
    Ok(None)
}
