//! Built-in invariant suites, runnable in the field without the test harness.

use serde::Serialize;

use rendezvous_core::beacon::{block_argmin, BeaconStream};
use rendezvous_core::coloring::{color_edge, find_ramsey_violation, palette_size};
use rendezvous_core::oneround::{
    count_cross_pairs, count_in_pairs, count_incident_pairs, count_out_pairs, random_orientation,
    Graph,
};
use rendezvous_core::schedules::{
    cycle_length, pair_schedule, symmetric_wrap, two_primes_in, ChannelSet,
};
use rendezvous_core::simulator::{optimal_sync, simulate_pair, sweep_shifts};
use rendezvous_core::strings::{
    agrees_both_ways, agrees_both_ways_cyclic, decode_async, differs_both_ways,
    differs_both_ways_cyclic, encode_async, encode_sync, is_balanced, is_strictly_catalan,
    peak_count, valley_count, BitString,
};

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SelftestEntry {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Anchors {
    /// Optimal synchronous slot count for three channels and two-channel
    /// sets, certified by exhaustion.
    pub sync_oracle_n3_k2: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SelftestResults {
    pub entries: Vec<SelftestEntry>,
    pub anchors: Anchors,
}

impl SelftestResults {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

/// Each check returns the first counterexample it finds, or `None`.
fn check(module: &'static str, name: &'static str, cx: Option<String>) -> SelftestEntry {
    SelftestEntry { module, name, passed: cx.is_none(), counterexample: cx }
}

fn codeword_shape() -> Option<String> {
    for len in 1..=4usize {
        for x in BitString::all_of_length(len) {
            let w = encode_async(&x).ok()?;
            if !is_balanced(&w)
                || !is_strictly_catalan(&w)
                || peak_count(&w).ok()? != 2
                || valley_count(&w).ok()? != 1
            {
                return Some(format!("input {x} -> {w}"));
            }
        }
    }
    None
}

fn codeword_pair_conditions() -> Option<String> {
    for len in 1..=4usize {
        let codes: Vec<(BitString, BitString)> = BitString::all_of_length(len)
            .map(|x| (x.clone(), encode_async(&x).unwrap()))
            .collect();
        for (i, (x, r)) in codes.iter().enumerate() {
            if !agrees_both_ways_cyclic(r, r).unwrap() {
                return Some(format!("self pair {x}"));
            }
            for (y, s) in codes.iter().skip(i + 1) {
                if !differs_both_ways_cyclic(r, s).unwrap() {
                    return Some(format!("pair {x} vs {y}"));
                }
            }
        }
    }
    None
}

fn decode_round_trip() -> Option<String> {
    for len in 1..=6usize {
        for x in BitString::all_of_length(len) {
            match decode_async(&encode_async(&x).unwrap()) {
                Ok(back) if back == x => {}
                other => return Some(format!("input {x} decoded to {other:?}")),
            }
        }
    }
    None
}

fn sync_pair_conditions() -> Option<String> {
    for len in 1..=6usize {
        let codes: Vec<BitString> =
            BitString::all_of_length(len).map(|x| encode_sync(&x).unwrap()).collect();
        for (i, r) in codes.iter().enumerate() {
            for (j, s) in codes.iter().enumerate() {
                let ok = if i == j {
                    agrees_both_ways(r, s).unwrap()
                } else {
                    differs_both_ways(r, s).unwrap()
                };
                if !ok {
                    return Some(format!("{r} vs {s}"));
                }
            }
        }
    }
    None
}

fn ramsey_coloring() -> Option<String> {
    for n in 2..=128u32 {
        if let Some((a, b, c)) =
            find_ramsey_violation(n, |a, b| color_edge(a, b, n).unwrap())
        {
            return Some(format!("n = {n}, path ({a}, {b}, {c})"));
        }
    }
    None
}

fn palette_bound() -> Option<String> {
    for n in 2..=128u32 {
        for a in 1..n {
            for b in a + 1..=n {
                let c = color_edge(a, b, n).unwrap();
                if c < 1 || c > palette_size(n) {
                    return Some(format!("color({a},{b}) = {c} at n = {n}"));
                }
            }
        }
    }
    None
}

fn pair_periods_uniform() -> Option<String> {
    for n in [4u32, 16, 64] {
        let expect = cycle_length(n);
        for a in 1..=n {
            for b in a + 1..=n {
                let s =
                    pair_schedule(&ChannelSet::new(vec![a, b], n).unwrap()).unwrap();
                if s.period() != Some(expect) {
                    return Some(format!("({a},{b}) at n = {n}: {:?}", s.period()));
                }
            }
        }
    }
    None
}

fn pair_rendezvous_sweep() -> Option<String> {
    let n = 8u32;
    let ell = cycle_length(n);
    let sets: Vec<ChannelSet> = (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| ChannelSet::new(vec![a, b], n).unwrap()))
        .collect();
    for sa in &sets {
        let a = pair_schedule(sa).unwrap();
        for sb in &sets {
            if sa.intersection(sb).is_empty() {
                continue;
            }
            let b = pair_schedule(sb).unwrap();
            let report = sweep_shifts(&a, &b, ell, ell);
            if report.unmet > 0 || report.worst_elapsed > ell {
                return Some(format!("{:?} vs {:?}", sa.channels(), sb.channels()));
            }
        }
    }
    None
}

fn prime_pairs() -> Option<String> {
    for k in 2..=64u64 {
        let (p, q) = two_primes_in(k);
        if !(k <= p && p < q && q <= 3 * k) {
            return Some(format!("k = {k}: ({p}, {q})"));
        }
    }
    None
}

fn symmetric_pattern() -> Option<String> {
    let pattern: BitString = "010011010011".parse().unwrap();
    if !agrees_both_ways_cyclic(&pattern, &pattern).unwrap() {
        return Some(pattern.to_string());
    }
    let s = symmetric_wrap(pair_schedule(&ChannelSet::new(vec![2, 6], 8).unwrap()).unwrap());
    for ta in 0..12u64 {
        for tb in 0..12u64 {
            let out = simulate_pair(&s, &s, ta, tb, 12);
            if !out.met {
                return Some(format!("offsets ({ta}, {tb})"));
            }
        }
    }
    None
}

fn beacon_agreement() -> Option<String> {
    let si = ChannelSet::new(vec![1, 5, 9], 16).unwrap();
    for seed in 0..20u64 {
        let beacon = BeaconStream::new(seed);
        let b0 = beacon.block_seed(0, 8);
        if block_argmin(&si, b0) != block_argmin(&si, b0) {
            return Some(format!("seed {seed}"));
        }
        if beacon.bits(0, 64) != beacon.bits(0, 64) {
            return Some(format!("seed {seed} stream"));
        }
    }
    None
}

fn orientation_pair_identity() -> Option<String> {
    let graphs = [
        Graph::new(3, vec![(1, 2), (2, 3), (1, 3)]).unwrap(),
        Graph::new(5, vec![(1, 2), (1, 3), (1, 4), (1, 5)]).unwrap(),
        Graph::new(4, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap(),
    ];
    for g in &graphs {
        for seed in 0..20u64 {
            let o = random_orientation(g, seed);
            let total =
                count_in_pairs(g, &o) + count_out_pairs(g, &o) + count_cross_pairs(g, &o);
            if total != count_incident_pairs(g) {
                return Some(format!("seed {seed} on {:?}", g.edges()));
            }
        }
    }
    None
}

/// Runs every suite and the oracle anchor.
pub fn run() -> SelftestResults {
    let entries = vec![
        check("strings", "codeword-shape", codeword_shape()),
        check("strings", "codeword-pair-conditions", codeword_pair_conditions()),
        check("strings", "decode-round-trip", decode_round_trip()),
        check("strings", "sync-pair-conditions", sync_pair_conditions()),
        check("coloring", "no-monochromatic-path", ramsey_coloring()),
        check("coloring", "palette-bound", palette_bound()),
        check("schedules", "pair-periods-uniform", pair_periods_uniform()),
        check("schedules", "pair-rendezvous-sweep", pair_rendezvous_sweep()),
        check("schedules", "prime-pairs-in-range", prime_pairs()),
        check("schedules", "symmetric-pattern", symmetric_pattern()),
        check("beacon", "stream-and-ranking-agreement", beacon_agreement()),
        check("oneround", "pair-partition-identity", orientation_pair_identity()),
    ];
    let anchor = optimal_sync(3, 2, 4).ok().and_then(|r| r.optimal_slots);
    let mut entries = entries;
    entries.push(check(
        "simulator",
        "sync-oracle-anchor",
        if anchor == Some(3) { None } else { Some(format!("optimal_sync(3,2,4) = {anchor:?}")) },
    ));
    SelftestResults { entries, anchors: Anchors { sync_oracle_n3_k2: anchor } }
}
