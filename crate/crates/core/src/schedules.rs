//! Hopping-schedule generators.
//!
//! A schedule maps slot indices to channels of its source set. Two-channel
//! sets hop a cyclic codeword chosen by the edge color of the pair; larger
//! sets run a sequence of fixed-length epochs, each devoted to a channel
//! pair selected by residues modulo two primes, so that any two overlapping
//! agents eventually devote overlapping epochs to a shared channel. A
//! symmetric wrapper interleaves accesses to the set minimum in a pattern
//! that meets itself under every rotation, giving constant-time rendezvous
//! whenever both agents hold the same set.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::coloring::{color_edge, palette_size};
use crate::rng::mix2;
use crate::strings::{bits_fixed, ceil_log2, encode_async, BitString};
use crate::{Error, Result};

/// A nonempty set of distinct channels drawn from the universe `[1, n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChannelSet {
    channels: Vec<u32>,
    n: u32,
}

impl ChannelSet {
    /// Sorts the channels and validates range and distinctness.
    pub fn new(mut channels: Vec<u32>, n: u32) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::InvalidChannelSet("set is empty".into()));
        }
        channels.sort_unstable();
        for w in channels.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidChannelSet(format!("duplicate channel {}", w[0])));
            }
        }
        for &c in &channels {
            if c == 0 || c > n {
                return Err(Error::InvalidChannel { channel: c, n });
            }
        }
        Ok(Self { channels, n })
    }

    pub fn channels(&self) -> &[u32] {
        &self.channels
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> u32 {
        self.channels[0]
    }

    pub fn contains(&self, c: u32) -> bool {
        self.channels.binary_search(&c).is_ok()
    }

    /// Channels common to both sets.
    pub fn intersection(&self, other: &ChannelSet) -> Vec<u32> {
        self.channels.iter().copied().filter(|&c| other.contains(c)).collect()
    }
}

/// One epoch of a general schedule.
#[derive(Debug, Clone)]
enum EpochPlay {
    Constant(u32),
    /// Cyclic channel word of length `cycle_length(n)`.
    Word(Arc<Vec<u32>>),
}

#[derive(Debug, Clone)]
enum Kind {
    Constant(u32),
    /// Repeats `slots` forever; `None` entries are silent.
    Cyclic(Arc<Vec<Option<u32>>>),
    /// Epochs of `2 * word_len` slots; epoch `e` plays `plays[e % plays.len()]`
    /// twice through.
    Epochs { word_len: u64, plays: Arc<Vec<EpochPlay>> },
    /// Twelve-slot blocks alternating the set minimum with one inner slot.
    Wrapped { inner: Box<Schedule>, low: u32 },
    /// Uniform choice over the set, derived statelessly from `(seed, t)`.
    Randomized { seed: u64 },
}

/// A total map from slot index to a channel of the source set, or to silence.
#[derive(Debug, Clone)]
pub struct Schedule {
    set: ChannelSet,
    period: Option<u64>,
    kind: Kind,
}

/// Access pattern of the symmetric wrapper: `false` slots hop the set
/// minimum, `true` slots pass through to the wrapped schedule. The word
/// realizes both agreeing pairs under every pair of rotations.
const WRAP_PATTERN: [bool; 12] =
    [false, true, false, false, true, true, false, true, false, false, true, true];

impl Schedule {
    /// Channel accessed in slot `t`, counted from this agent's wake-up.
    /// `None` is silence and never counts as a meeting.
    pub fn channel_at(&self, t: u64) -> Option<u32> {
        match &self.kind {
            Kind::Constant(c) => Some(*c),
            Kind::Cyclic(slots) => slots[(t % slots.len() as u64) as usize],
            Kind::Epochs { word_len, plays } => {
                let epoch_len = 2 * word_len;
                let epoch = (t / epoch_len) % plays.len() as u64;
                let offset = t % epoch_len;
                match &plays[epoch as usize] {
                    EpochPlay::Constant(c) => Some(*c),
                    EpochPlay::Word(word) => Some(word[(offset % word_len) as usize]),
                }
            }
            Kind::Wrapped { inner, low } => {
                let pos = (t % 12) as usize;
                if WRAP_PATTERN[pos] {
                    inner.channel_at(t / 12)
                } else {
                    Some(*low)
                }
            }
            Kind::Randomized { seed } => {
                let idx = mix2(*seed, t) % self.set.len() as u64;
                Some(self.set.channels()[idx as usize])
            }
        }
    }

    /// Smallest period of the generated sequence, or `None` if aperiodic.
    pub fn period(&self) -> Option<u64> {
        self.period
    }

    pub fn set(&self) -> &ChannelSet {
        &self.set
    }
}

/// Smallest period of the infinite repetition of `slots`.
fn minimal_period(slots: &[Option<u32>]) -> u64 {
    let n = slots.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (d..n).all(|i| slots[i] == slots[i % d]) {
            return d as u64;
        }
    }
    n as u64
}

/// Width in bits of the color field for universe size `n`.
fn color_width(n: u32) -> u32 {
    ceil_log2(palette_size(n) as u64).unwrap().max(1)
}

/// Period of every two-channel schedule at universe size `n`.
///
/// With `m = max(1, ceil_log2(max(1, ceil_log2(n))))` this equals
/// `2m + 4·max(1, ceil_log2(2m)) + 6`, which grows as O(log log n).
pub fn cycle_length(n: u32) -> u64 {
    let m = color_width(n) as u64;
    2 * m + 4 * ceil_log2(2 * m).unwrap().max(1) as u64 + 6
}

/// Codeword hopped by pairs whose edge color has zero-based value `value`.
pub fn pair_codeword(value: u32, n: u32) -> BitString {
    let m = color_width(n);
    encode_async(&bits_fixed(value as u64, m)).unwrap()
}

fn constant_schedule(set: ChannelSet, c: u32) -> Schedule {
    Schedule { set, period: Some(1), kind: Kind::Constant(c) }
}

/// Schedule for a set of one or two channels.
///
/// Two-channel sets cyclically hop the codeword of their edge color, bit 0
/// meaning the smaller channel and bit 1 the larger. All two-channel
/// schedules at a fixed `n` share the period [`cycle_length`]`(n)`.
pub fn pair_schedule(set: &ChannelSet) -> Result<Schedule> {
    match set.len() {
        1 => Ok(constant_schedule(set.clone(), set.min())),
        2 => {
            let (lo, hi) = (set.channels()[0], set.channels()[1]);
            let color = color_edge(lo, hi, set.n())?;
            let word = pair_codeword(color - 1, set.n());
            let slots: Vec<Option<u32>> =
                word.iter().map(|b| Some(if b { hi } else { lo })).collect();
            let period = minimal_period(&slots);
            Ok(Schedule { set: set.clone(), period: Some(period), kind: Kind::Cyclic(Arc::new(slots)) })
        }
        size => Err(Error::SetTooLarge { size, max: 2 }),
    }
}

/// The two smallest distinct primes in `[k, 3k]`, for `k >= 2`.
///
/// Two such primes always exist in this range.
pub fn two_primes_in(k: u64) -> (u64, u64) {
    assert!(k >= 2, "prime pair needs k >= 2");
    let is_prime = |v: u64| -> bool {
        if v < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= v {
            if v.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    };
    let mut found = (k..=3 * k).filter(|&v| is_prime(v));
    let p = found.next().expect("a prime exists in [k, 3k]");
    let q = found.next().expect("two primes exist in [k, 3k]");
    (p, q)
}

/// Schedule for an arbitrary channel set.
///
/// The schedule runs in epochs of `2 * cycle_length(n)` slots. Epoch `e`
/// hops the pair schedule of `{a_i, a_j}` twice through, where
/// `i = e mod p` and `j = e mod p'` for the two smallest primes in
/// `[k, 3k]`, residues at or beyond `k` falling back to index 0. Epochs
/// whose two indices agree hop that channel constantly.
pub fn general_schedule(set: &ChannelSet) -> Schedule {
    let k = set.len() as u64;
    if k == 1 {
        return constant_schedule(set.clone(), set.min());
    }
    let n = set.n();
    let word_len = cycle_length(n);
    let (p, q) = two_primes_in(k);
    let cycle = p * q;

    let mut words: HashMap<(u32, u32), Arc<Vec<u32>>> = HashMap::new();
    let mut plays = Vec::with_capacity(cycle as usize);
    for e in 0..cycle {
        let mut i = e % p;
        let mut j = e % q;
        if i >= k {
            i = 0;
        }
        if j >= k {
            j = 0;
        }
        let a = set.channels()[i as usize];
        let b = set.channels()[j as usize];
        if a == b {
            plays.push(EpochPlay::Constant(a));
            continue;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let word = words
            .entry((lo, hi))
            .or_insert_with(|| {
                let color = color_edge(lo, hi, n).unwrap();
                Arc::new(
                    pair_codeword(color - 1, n)
                        .iter()
                        .map(|bit| if bit { hi } else { lo })
                        .collect(),
                )
            })
            .clone();
        plays.push(EpochPlay::Word(word));
    }

    Schedule {
        set: set.clone(),
        period: Some(2 * word_len * cycle),
        kind: Kind::Epochs { word_len, plays: Arc::new(plays) },
    }
}

/// Wraps a schedule so that equal sets rendezvous in constant time.
///
/// Each inner slot expands to twelve slots alternating the set minimum with
/// the inner channel in the fixed pattern `010011010011` (0 = minimum).
/// Since that word realizes both agreeing pairs under every rotation, two
/// agents with the same set meet at their minimum within twelve slots; any
/// other pair pays at most the twelvefold slowdown.
pub fn symmetric_wrap(inner: Schedule) -> Schedule {
    let low = inner.set.min();
    Schedule {
        set: inner.set.clone(),
        period: inner.period.map(|p| 12 * p),
        kind: Kind::Wrapped { inner: Box::new(inner), low },
    }
}

/// Baseline that hops channel `t mod n + 1` when it is in the set and stays
/// silent otherwise. Guarantees a synchronous meeting within `n` slots for
/// overlapping sets, but nothing under clock skew.
pub fn sweep_baseline(set: &ChannelSet) -> Schedule {
    let n = set.n();
    let slots: Vec<Option<u32>> =
        (0..n).map(|t| if set.contains(t + 1) { Some(t + 1) } else { None }).collect();
    let period = minimal_period(&slots);
    Schedule { set: set.clone(), period: Some(period), kind: Kind::Cyclic(Arc::new(slots)) }
}

/// Baseline that hops a uniform pseudorandom channel of the set each slot,
/// derived statelessly from `(seed, t)`.
pub fn randomized_baseline(set: &ChannelSet, seed: u64) -> Schedule {
    if set.len() == 1 {
        return constant_schedule(set.clone(), set.min());
    }
    Schedule { set: set.clone(), period: None, kind: Kind::Randomized { seed } }
}
