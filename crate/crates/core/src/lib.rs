//! Blind-rendezvous channel hopping for multichannel discovery.
//!
//! Two radios that each see only a subset of a channel universe `[1, n]`,
//! share no clock origin, and carry no identity must still end up on the
//! same channel in the same time slot. This crate builds the deterministic
//! hopping schedules that guarantee such a meeting, together with the
//! machinery needed to validate them empirically:
//!
//! - [`strings`]: combinatorics on binary strings — balanced / Catalan
//!   predicates, rotation-robust rendezvous conditions, and the invertible
//!   encoding pipeline that produces the pair-schedule codewords.
//! - [`coloring`]: an edge coloring of the linear order on `[1, n]` with no
//!   monochromatic directed path of length two, used to assign codewords to
//!   two-channel sets.
//! - [`schedules`]: schedule generators — two-channel pair schedules,
//!   prime-residue epoch schedules for arbitrary sets, a symmetric wrapper
//!   with constant self-rendezvous time, and baselines.
//! - [`simulator`]: a discrete time-slot rendezvous engine, shift sweeps,
//!   trial batches, and exhaustive small-instance oracles.
//! - [`beacon`]: a shared-randomness protocol where both agents hop to the
//!   minimum of their set under a per-block pseudorandom ranking.
//! - [`oneround`]: single-round rendezvous maximization on graphs via
//!   low-rank SDP ascent and hyperplane rounding.
//!
//! All schedule constructions are pure functions of their inputs; anything
//! randomized is driven by an explicit seed and is reproducible.

pub mod beacon;
pub mod coloring;
pub mod oneround;
pub mod schedules;
pub mod simulator;
pub mod strings;

mod error;
mod rng;

pub use error::{Error, Result};
pub use schedules::{ChannelSet, Schedule};
pub use strings::BitString;
