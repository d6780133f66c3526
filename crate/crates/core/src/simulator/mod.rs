//! Discrete time-slot rendezvous engine.
//!
//! Two agents wake at arbitrary slots and run their schedules relative to
//! their own wake-up. They meet when both are awake and hop the same
//! channel in the same absolute slot; silent slots never match. The engine
//! reports the earliest meeting within a horizon, sweeps relative wake
//! offsets exhaustively, and batches randomized trials against the analytic
//! bound of each schedule family.

mod oracle;

pub use oracle::{optimal_async_cyclic, optimal_sync, OracleResult, WitnessEntry};

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::schedules::{
    cycle_length, general_schedule, pair_schedule, randomized_baseline, sweep_baseline,
    symmetric_wrap, ChannelSet, Schedule,
};
use crate::{Error, Result};

/// Earliest meeting of two schedules, if one occurred within the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RendezvousOutcome {
    pub met: bool,
    /// Absolute slot of the meeting.
    pub slot: Option<u64>,
    pub channel: Option<u32>,
    /// Slots elapsed past the later wake-up.
    pub elapsed: Option<u64>,
}

impl RendezvousOutcome {
    fn missed() -> Self {
        Self { met: false, slot: None, channel: None, elapsed: None }
    }
}

/// Runs two schedules from wake slots `t_a` and `t_b` and returns the first
/// meeting in `[max(t_a, t_b), max(t_a, t_b) + horizon]`.
pub fn simulate_pair(
    a: &Schedule,
    b: &Schedule,
    t_a: u64,
    t_b: u64,
    horizon: u64,
) -> RendezvousOutcome {
    let start = t_a.max(t_b);
    for elapsed in 0..=horizon {
        let t = start + elapsed;
        if let (Some(x), Some(y)) = (a.channel_at(t - t_a), b.channel_at(t - t_b)) {
            if x == y {
                return RendezvousOutcome {
                    met: true,
                    slot: Some(t),
                    channel: Some(x),
                    elapsed: Some(elapsed),
                };
            }
        }
    }
    RendezvousOutcome::missed()
}

/// Aggregate of many rendezvous trials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepReport {
    pub trials: u64,
    /// Trials that met within their horizon.
    pub met: u64,
    pub unmet: u64,
    /// Largest elapsed time over met trials.
    pub worst_elapsed: u64,
    /// Wake offsets of the worst trial.
    pub worst_offsets: (u64, u64),
    /// Elapsed time -> number of trials.
    pub histogram: BTreeMap<u64, u64>,
    /// Whether the sweep covered every distinct relative alignment.
    pub exhaustive: bool,
}

impl SweepReport {
    fn new() -> Self {
        Self {
            trials: 0,
            met: 0,
            unmet: 0,
            worst_elapsed: 0,
            worst_offsets: (0, 0),
            histogram: BTreeMap::new(),
            exhaustive: false,
        }
    }

    fn record(&mut self, offsets: (u64, u64), outcome: &RendezvousOutcome) {
        self.trials += 1;
        match outcome.elapsed {
            Some(e) => {
                self.met += 1;
                *self.histogram.entry(e).or_insert(0) += 1;
                if e >= self.worst_elapsed {
                    self.worst_elapsed = e;
                    self.worst_offsets = offsets;
                }
            }
            None => self.unmet += 1,
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Sweeps all one-sided wake offsets `(0, d)` and `(d, 0)` for
/// `d < shift_bound`. For cyclic schedules every relative alignment is
/// covered once `shift_bound` reaches the least common multiple of the two
/// periods; the report's `exhaustive` flag records whether it did.
pub fn sweep_shifts(
    a: &Schedule,
    b: &Schedule,
    shift_bound: u64,
    horizon: u64,
) -> SweepReport {
    let mut report = SweepReport::new();
    report.exhaustive = match (a.period(), b.period()) {
        (Some(p), Some(q)) => shift_bound >= p / gcd(p, q) * q,
        _ => false,
    };
    for d in 0..shift_bound {
        report.record((0, d), &simulate_pair(a, b, 0, d, horizon));
        report.record((d, 0), &simulate_pair(a, b, d, 0, horizon));
    }
    report
}

/// Schedule family exercised by a trial batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Two-channel pair schedules.
    Pair,
    /// Prime-residue epoch schedules for arbitrary sets.
    General,
    /// Symmetric wrapper around the general schedule, equal sets.
    Symmetric,
    /// Slot-indexed sweep baseline, synchronous wake-up.
    Sweep,
    /// Uniform random hopping; no bound asserted.
    Random,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pair" => Ok(Self::Pair),
            "general" => Ok(Self::General),
            "symmetric" => Ok(Self::Symmetric),
            "sweep" => Ok(Self::Sweep),
            "random" => Ok(Self::Random),
            other => Err(Error::InvalidConfig(format!("unknown family {other:?}"))),
        }
    }
}

/// Configuration of a randomized trial batch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialConfig {
    pub n: u32,
    pub family: Family,
    /// Number of sampled pairs.
    pub pairs: u32,
    pub seed: u64,
    /// Largest sampled set size (clamped to 2 for the pair family).
    pub max_size: u32,
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig("universe size must be at least 2".into()));
        }
        if self.pairs == 0 {
            return Err(Error::InvalidConfig("pair count must be positive".into()));
        }
        if self.max_size == 0 || self.max_size > self.n {
            return Err(Error::InvalidConfig(format!(
                "max set size must lie in [1, {}]",
                self.n
            )));
        }
        Ok(())
    }
}

/// A trial that exceeded the analytic bound of its family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub trial: u32,
    pub set_a: Vec<u32>,
    pub set_b: Vec<u32>,
    pub t_a: u64,
    pub t_b: u64,
    pub bound: u64,
    pub elapsed: Option<u64>,
}

/// Result of [`run_trial_batch`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BatchReport {
    pub config: TrialConfig,
    pub report: SweepReport,
    /// Must stay empty for the deterministic families.
    pub violations: Vec<Violation>,
}

fn sample_set(rng: &mut ChaCha8Rng, n: u32, size: u32, force: Option<u32>) -> ChannelSet {
    let mut channels: Vec<u32> = force.into_iter().collect();
    while channels.len() < size as usize {
        let c = rng.gen_range(1..=n);
        if !channels.contains(&c) {
            channels.push(c);
        }
    }
    ChannelSet::new(channels, n).unwrap()
}

/// One trial's schedules, analytic bound, and horizon.
struct TrialPlan {
    a: Schedule,
    b: Schedule,
    bound: Option<u64>,
    horizon: u64,
    offsets: (u64, u64),
}

fn plan_trial(config: &TrialConfig, rng: &mut ChaCha8Rng, trial: u32) -> TrialPlan {
    let n = config.n;
    let cap = config.max_size.min(n);
    let ell = cycle_length(n);
    let sample_sizes = |rng: &mut ChaCha8Rng, cap: u32| -> (u32, u32) {
        (rng.gen_range(1..=cap), rng.gen_range(1..=cap))
    };
    let offset_in = |rng: &mut ChaCha8Rng, period: u64| -> u64 { rng.gen_range(0..=period) };

    match config.family {
        Family::Pair => {
            let (ka, kb) = sample_sizes(rng, cap.min(2));
            let common = rng.gen_range(1..=n);
            let sa = sample_set(rng, n, ka, Some(common));
            let sb = sample_set(rng, n, kb, Some(common));
            let a = pair_schedule(&sa).unwrap();
            let b = pair_schedule(&sb).unwrap();
            let bound = ell;
            let offsets = (offset_in(rng, a.period().unwrap()), offset_in(rng, b.period().unwrap()));
            TrialPlan { a, b, bound: Some(bound), horizon: 4 * bound, offsets }
        }
        Family::General => {
            let (ka, kb) = sample_sizes(rng, cap);
            let common = rng.gen_range(1..=n);
            let sa = sample_set(rng, n, ka, Some(common));
            let sb = sample_set(rng, n, kb, Some(common));
            let a = general_schedule(&sa);
            let b = general_schedule(&sb);
            let bound = 2 * (3 * ka as u64) * (3 * kb as u64) * ell;
            let offsets = (offset_in(rng, a.period().unwrap()), offset_in(rng, b.period().unwrap()));
            TrialPlan { a, b, bound: Some(bound), horizon: 4 * bound, offsets }
        }
        Family::Symmetric => {
            let size = rng.gen_range(1..=cap);
            let s = sample_set(rng, n, size, None);
            let a = symmetric_wrap(general_schedule(&s));
            let b = a.clone();
            let period = a.period().unwrap();
            let offsets = (offset_in(rng, period), offset_in(rng, period));
            TrialPlan { a, b, bound: Some(12), horizon: 48, offsets }
        }
        Family::Sweep => {
            let (ka, kb) = sample_sizes(rng, cap);
            let common = rng.gen_range(1..=n);
            let sa = sample_set(rng, n, ka, Some(common));
            let sb = sample_set(rng, n, kb, Some(common));
            let a = sweep_baseline(&sa);
            let b = sweep_baseline(&sb);
            // Synchronous guarantee only: equal wake slots.
            TrialPlan { a, b, bound: Some(n as u64), horizon: 4 * n as u64, offsets: (0, 0) }
        }
        Family::Random => {
            let (ka, kb) = sample_sizes(rng, cap);
            let common = rng.gen_range(1..=n);
            let sa = sample_set(rng, n, ka, Some(common));
            let sb = sample_set(rng, n, kb, Some(common));
            let a = randomized_baseline(&sa, config.seed ^ (trial as u64) << 1);
            let b = randomized_baseline(&sb, config.seed ^ ((trial as u64) << 1 | 1));
            let horizon = 64 * (ka as u64) * (kb as u64) * (n as u64).ilog2().max(1) as u64;
            let offsets = (rng.gen_range(0..=n as u64), rng.gen_range(0..=n as u64));
            TrialPlan { a, b, bound: None, horizon, offsets }
        }
    }
}

/// One completed trial; trials are independent given `(config, trial)` and
/// may run on any worker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialOutcome {
    pub trial: u32,
    pub offsets: (u64, u64),
    pub outcome: RendezvousOutcome,
    pub violation: Option<Violation>,
}

/// Runs a single trial. The trial's randomness derives from
/// `(config.seed, trial)` alone, so batches merge identically no matter how
/// trials are scheduled.
pub fn run_trial(config: &TrialConfig, trial: u32) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(crate::rng::mix2(config.seed, trial as u64));
    let plan = plan_trial(config, &mut rng, trial);
    let outcome = simulate_pair(&plan.a, &plan.b, plan.offsets.0, plan.offsets.1, plan.horizon);
    let violation = plan.bound.and_then(|bound| {
        let violated = match outcome.elapsed {
            Some(e) => e > bound,
            None => true,
        };
        violated.then(|| Violation {
            trial,
            set_a: plan.a.set().channels().to_vec(),
            set_b: plan.b.set().channels().to_vec(),
            t_a: plan.offsets.0,
            t_b: plan.offsets.1,
            bound,
            elapsed: outcome.elapsed,
        })
    });
    TrialOutcome { trial, offsets: plan.offsets, outcome, violation }
}

/// Folds trial outcomes into a batch report. Outcomes must be supplied in
/// trial order for byte-identical reports.
pub fn collect_batch(
    config: &TrialConfig,
    outcomes: impl IntoIterator<Item = TrialOutcome>,
) -> BatchReport {
    let mut report = SweepReport::new();
    let mut violations = Vec::new();
    for o in outcomes {
        report.record(o.offsets, &o.outcome);
        violations.extend(o.violation);
    }
    BatchReport { config: config.clone(), report, violations }
}

/// Samples overlapping channel-set pairs with random wake offsets and
/// aggregates meeting times. Trials whose elapsed time exceeds the family
/// bound (or that fail to meet at a fourfold horizon) are recorded as
/// violations.
pub fn run_trial_batch(config: &TrialConfig) -> Result<BatchReport> {
    config.validate()?;
    Ok(collect_batch(config, (0..config.pairs).map(|t| run_trial(config, t))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(channels: &[u32], n: u32) -> ChannelSet {
        ChannelSet::new(channels.to_vec(), n).unwrap()
    }

    #[test]
    fn identical_constant_schedules_meet_immediately() {
        let a = pair_schedule(&set(&[3], 8)).unwrap();
        let out = simulate_pair(&a, &a, 0, 0, 10);
        assert_eq!(out.slot, Some(0));
        assert_eq!(out.channel, Some(3));
        assert_eq!(out.elapsed, Some(0));
    }

    #[test]
    fn disjoint_sets_never_meet() {
        let a = pair_schedule(&set(&[1, 2], 8)).unwrap();
        let b = pair_schedule(&set(&[3, 4], 8)).unwrap();
        assert!(!simulate_pair(&a, &b, 0, 0, 500).met);
    }

    #[test]
    fn pair_schedules_meet_within_cycle_for_all_offsets() {
        let n = 4;
        let ell = cycle_length(n);
        let a = pair_schedule(&set(&[1, 2], n)).unwrap();
        let b = pair_schedule(&set(&[2, 3], n)).unwrap();
        for ta in 0..ell {
            for tb in 0..ell {
                let out = simulate_pair(&a, &b, ta, tb, ell);
                assert!(out.met, "offsets ({ta},{tb})");
                assert!(out.elapsed.unwrap() <= ell);
            }
        }
    }

    #[test]
    fn simulate_is_symmetric_in_its_arguments() {
        let a = general_schedule(&set(&[1, 4, 6], 8));
        let b = general_schedule(&set(&[2, 4], 8));
        for (ta, tb) in [(0, 17), (5, 0), (13, 29), (40, 3)] {
            let lhs = simulate_pair(&a, &b, ta, tb, 4000);
            let rhs = simulate_pair(&b, &a, tb, ta, 4000);
            assert_eq!(lhs.slot, rhs.slot);
            assert_eq!(lhs.channel, rhs.channel);
        }
    }

    #[test]
    fn outcome_depends_only_on_relative_shift_for_equal_periods() {
        let n = 4;
        let ell = cycle_length(n);
        let a = pair_schedule(&set(&[1, 3], n)).unwrap();
        let b = pair_schedule(&set(&[3, 4], n)).unwrap();
        for d in 0..ell {
            let base = simulate_pair(&a, &b, 0, d, 2 * ell);
            for lift in 1..4u64 {
                let shifted = simulate_pair(&a, &b, lift * ell, lift * ell + d, 2 * ell);
                assert_eq!(base.elapsed, shifted.elapsed, "d={d} lift={lift}");
                assert_eq!(base.channel, shifted.channel);
            }
        }
    }

    #[test]
    fn sweep_shifts_reports_exhaustiveness() {
        let a = pair_schedule(&set(&[1, 2], 4)).unwrap();
        let b = pair_schedule(&set(&[2, 3], 4)).unwrap();
        let ell = cycle_length(4);
        let full = sweep_shifts(&a, &b, ell, 2 * ell);
        assert!(full.exhaustive);
        assert_eq!(full.trials, 2 * ell);
        assert_eq!(full.unmet, 0);
        assert!(full.worst_elapsed <= ell);
        let partial = sweep_shifts(&a, &b, ell - 1, 2 * ell);
        assert!(!partial.exhaustive);
    }

    #[test]
    fn symmetric_wrap_self_rendezvous_within_twelve() {
        let s = symmetric_wrap(general_schedule(&set(&[2, 5, 7], 16)));
        for ta in 0..24 {
            for tb in 0..24 {
                let out = simulate_pair(&s, &s, ta, tb, 12);
                assert!(out.met, "offsets ({ta},{tb})");
                assert!(out.elapsed.unwrap() <= 12);
            }
        }
        // A meeting at the set minimum in particular is guaranteed: the
        // pattern realizes (minimum, minimum) under every relative shift.
        let out = simulate_pair(&s, &s, 0, 5, 12);
        assert!(out.met);
    }

    #[test]
    fn wrapped_rendezvous_within_twelvefold_of_inner() {
        let sa = set(&[1, 5], 16);
        let sb = set(&[5, 9], 16);
        let ia = general_schedule(&sa);
        let ib = general_schedule(&sb);
        let wa = symmetric_wrap(ia.clone());
        let wb = symmetric_wrap(ib.clone());
        let horizon = 100 * cycle_length(16) * 12;
        for (ta, tb) in [(0u64, 0u64), (0, 3), (2, 0), (5, 1)] {
            let inner = simulate_pair(&ia, &ib, ta, tb, horizon);
            let wrapped = simulate_pair(&wa, &wb, 12 * ta, 12 * tb, horizon);
            assert!(inner.met && wrapped.met);
            assert!(
                wrapped.elapsed.unwrap() <= 12 * inner.elapsed.unwrap() + 12,
                "offsets ({ta},{tb}): wrapped {} vs inner {}",
                wrapped.elapsed.unwrap(),
                inner.elapsed.unwrap()
            );
        }
    }

    #[test]
    fn sweep_baseline_meets_synchronously_within_n() {
        // Every overlapping pair over a small universe, equal wake slots.
        let n = 10u32;
        let sets: Vec<ChannelSet> = (1u32..1 << n)
            .map(|mask| {
                let channels: Vec<u32> =
                    (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
                ChannelSet::new(channels, n).unwrap()
            })
            .collect();
        for (i, sa) in sets.iter().enumerate() {
            let a = sweep_baseline(sa);
            for sb in sets.iter().skip(i) {
                if sa.intersection(sb).is_empty() {
                    continue;
                }
                let b = sweep_baseline(sb);
                let out = simulate_pair(&a, &b, 0, 0, n as u64);
                assert!(out.met);
                let c = out.channel.unwrap();
                assert_eq!(out.slot.unwrap(), c as u64 - 1);
            }
        }
    }

    #[test]
    fn trial_batch_is_deterministic_and_violation_free() {
        let config = TrialConfig {
            n: 16,
            family: Family::General,
            pairs: 50,
            seed: 1234,
            max_size: 4,
        };
        let one = run_trial_batch(&config).unwrap();
        let two = run_trial_batch(&config).unwrap();
        assert_eq!(one, two);
        assert!(one.violations.is_empty(), "{:?}", one.violations);
        assert_eq!(one.report.trials, 50);
        assert_eq!(one.report.unmet, 0);
    }

    #[test]
    fn random_family_reports_without_bound() {
        let config =
            TrialConfig { n: 16, family: Family::Random, pairs: 40, seed: 9, max_size: 4 };
        let report = run_trial_batch(&config).unwrap();
        assert!(report.violations.is_empty());
        assert!(!report.report.histogram.is_empty());
    }

    #[test]
    fn invalid_configs_rejected() {
        for config in [
            TrialConfig { n: 1, family: Family::Pair, pairs: 1, seed: 0, max_size: 1 },
            TrialConfig { n: 8, family: Family::Pair, pairs: 0, seed: 0, max_size: 1 },
            TrialConfig { n: 8, family: Family::Pair, pairs: 1, seed: 0, max_size: 9 },
        ] {
            assert!(run_trial_batch(&config).is_err(), "{config:?}");
        }
    }
}
