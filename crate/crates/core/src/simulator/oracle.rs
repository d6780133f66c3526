//! Exhaustive small-instance oracles.
//!
//! These certify optimal rendezvous slot counts for tiny universes by
//! searching every assignment of schedules to the k-subsets of `[1, n]`.
//! They exist to anchor the constructions: a guaranteed family can never
//! beat the oracle value, and the oracle value bounds what any family must
//! pay. Instances are guarded aggressively because the search space is
//! `(#words)^(#subsets)`.

use std::collections::HashMap;

use serde::Serialize;

use crate::{Error, Result};

/// One subset's schedule in an optimal assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessEntry {
    pub set: Vec<u32>,
    /// Channel per slot; cyclic for the asynchronous oracle.
    pub word: Vec<u32>,
}

/// Outcome of an oracle run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleResult {
    pub n: u32,
    pub k: u32,
    pub cap: u64,
    /// Minimal number of slots within which every overlapping pair meets,
    /// or `None` when no assignment achieves it within the cap.
    pub optimal_slots: Option<u64>,
    pub witness: Option<Vec<WitnessEntry>>,
}

/// Fixed-capacity bitset over word-domain positions.
#[derive(Clone)]
struct Bits {
    blocks: Vec<u64>,
}

impl Bits {
    fn full(len: usize) -> Self {
        let mut blocks = vec![u64::MAX; len.div_ceil(64)];
        if !len.is_multiple_of(64) {
            *blocks.last_mut().unwrap() = (1u64 << (len % 64)) - 1;
        }
        Self { blocks }
    }

    fn empty(len: usize) -> Self {
        Self { blocks: vec![0; len.div_ceil(64)] }
    }

    fn set(&mut self, i: usize) {
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    fn intersect_with(&mut self, other: &Bits) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
    }

    fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let i = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(bi * 64 + i)
            })
        })
    }
}

fn combinations(n: u32, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k as usize);
    fn go(start: u32, n: u32, k: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == k as usize {
            out.push(current.clone());
            return;
        }
        for c in start..=n {
            current.push(c);
            go(c + 1, n, k, current, out);
            current.pop();
        }
    }
    go(1, n, k, &mut current, &mut out);
    out
}

fn overlaps(a: &[u32], b: &[u32]) -> bool {
    a.iter().any(|c| b.contains(c))
}

/// Backtracking search over word assignments with forward checking.
///
/// `masks[(i, j)][pos_i]` lists the domain positions of variable `j`
/// compatible with position `pos_i` of variable `i`, for `i < j`.
fn assign(
    num_vars: usize,
    domain_sizes: &[usize],
    masks: &HashMap<(usize, usize), Vec<Bits>>,
) -> Option<Vec<usize>> {
    fn go(
        var: usize,
        num_vars: usize,
        cand: &[Bits],
        masks: &HashMap<(usize, usize), Vec<Bits>>,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if var == num_vars {
            return true;
        }
        let positions: Vec<usize> = cand[var].ones().collect();
        for pos in positions {
            let mut next = cand.to_vec();
            let mut viable = true;
            for (j, cand_j) in next.iter_mut().enumerate().skip(var + 1) {
                if let Some(m) = masks.get(&(var, j)) {
                    cand_j.intersect_with(&m[pos]);
                    if cand_j.is_empty() {
                        viable = false;
                        break;
                    }
                }
            }
            if !viable {
                continue;
            }
            chosen.push(pos);
            if go(var + 1, num_vars, &next, masks, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let cand: Vec<Bits> = domain_sizes.iter().map(|&s| Bits::full(s)).collect();
    if cand.iter().any(|c| c.is_empty()) {
        return None;
    }
    let mut chosen = Vec::with_capacity(num_vars);
    if go(0, num_vars, &cand, masks, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

/// All words of exactly `len` slots over `channels`.
fn words_of_length(channels: &[u32], len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                channels.iter().map(move |&c| {
                    let mut w2 = w.clone();
                    w2.push(c);
                    w2
                })
            })
            .collect();
    }
    out
}

/// Minimal `T` such that some assignment of length-`T` words to every
/// k-subset makes all overlapping pairs meet at a common slot `t < T` under
/// aligned clocks.
pub fn optimal_sync(n: u32, k: u32, t_cap: u64) -> Result<OracleResult> {
    if k == 0 || k > n {
        return Err(Error::InvalidConfig(format!("k = {k} outside [1, {n}]")));
    }
    let subsets = combinations(n, k);
    if subsets.len() > 8 || k > 4 || t_cap > 6 {
        return Err(Error::InstanceTooLarge(format!(
            "sync oracle limited to 8 subsets, k <= 4, cap <= 6; got {} subsets, k = {k}, cap = {t_cap}",
            subsets.len()
        )));
    }
    let num = subsets.len();

    for t in 1..=t_cap {
        if (k as u64).pow(t as u32) > 4096 {
            return Err(Error::InstanceTooLarge(format!("{k}^{t} words per subset")));
        }
        let domains: Vec<Vec<Vec<u32>>> =
            subsets.iter().map(|s| words_of_length(s, t as usize)).collect();
        let mut masks = HashMap::new();
        for i in 0..num {
            for j in i + 1..num {
                if !overlaps(&subsets[i], &subsets[j]) {
                    continue;
                }
                let per_word: Vec<Bits> = domains[i]
                    .iter()
                    .map(|u| {
                        let mut bits = Bits::empty(domains[j].len());
                        for (pos, v) in domains[j].iter().enumerate() {
                            if u.iter().zip(v).any(|(a, b)| a == b) {
                                bits.set(pos);
                            }
                        }
                        bits
                    })
                    .collect();
                masks.insert((i, j), per_word);
            }
        }
        let sizes: Vec<usize> = domains.iter().map(|d| d.len()).collect();
        if let Some(chosen) = assign(num, &sizes, &masks) {
            let witness = subsets
                .iter()
                .enumerate()
                .map(|(i, s)| WitnessEntry { set: s.clone(), word: domains[i][chosen[i]].clone() })
                .collect();
            return Ok(OracleResult { n, k, cap: t_cap, optimal_slots: Some(t), witness: Some(witness) });
        }
    }
    Ok(OracleResult { n, k, cap: t_cap, optimal_slots: None, witness: None })
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Earliest elapsed meeting of cyclic words `u` and `v` when the second
/// agent wakes `delta` slots after the first, or `None` if they never meet.
fn earliest_cyclic(u: &[u32], v: &[u32], delta: u64) -> Option<u64> {
    let (a, b) = (u.len() as u64, v.len() as u64);
    let horizon = lcm(a, b);
    (0..horizon).find(|e| u[((delta + e) % a) as usize] == v[(e % b) as usize])
}

/// Slots needed for `u` and `v` to meet under the worst relative wake
/// offset, or `None` if some offset never meets.
fn slots_required(u: &[u32], v: &[u32]) -> Option<u64> {
    let sweep = lcm(u.len() as u64, v.len() as u64);
    let mut worst = 0;
    for delta in 0..sweep {
        worst = worst.max(earliest_cyclic(u, v, delta)?);
        worst = worst.max(earliest_cyclic(v, u, delta)?);
    }
    Some(worst + 1)
}

/// Minimal worst-case slot count over assignments of cyclic words of period
/// at most `period_cap` to every k-subset, sweeping all relative wake
/// offsets of every overlapping pair (sets paired with themselves included).
pub fn optimal_async_cyclic(n: u32, k: u32, period_cap: u64) -> Result<OracleResult> {
    if k == 0 || k > n {
        return Err(Error::InvalidConfig(format!("k = {k} outside [1, {n}]")));
    }
    let subsets = combinations(n, k);
    let words_per_subset: u64 = (1..=period_cap).map(|len| (k as u64).pow(len as u32)).sum();
    let pair_count = subsets.len() * subsets.len().saturating_sub(1) / 2;
    let sweep = (1..=period_cap).fold(1, lcm);
    let est = pair_count as u64 * words_per_subset * words_per_subset * sweep * sweep;
    if subsets.len() > 6 || k > 3 || period_cap > 6 || words_per_subset > 512 || est > 4_000_000_000
    {
        return Err(Error::InstanceTooLarge(format!(
            "async oracle limited to 6 subsets, k <= 3, cap <= 6, 512 words; got {} subsets, {} words",
            subsets.len(),
            words_per_subset,
        )));
    }
    let num = subsets.len();

    let all_words: Vec<Vec<Vec<u32>>> = subsets
        .iter()
        .map(|s| {
            (1..=period_cap as usize).flat_map(|len| words_of_length(s, len)).collect::<Vec<_>>()
        })
        .collect();

    // Slots each word needs against itself (a set must meet a twin of
    // itself at every offset), and against each word of overlapping sets.
    let self_req: Vec<Vec<Option<u64>>> = all_words
        .iter()
        .map(|words| words.iter().map(|w| slots_required(w, w)).collect())
        .collect();
    let mut pair_req: HashMap<(usize, usize), Vec<Vec<Option<u64>>>> = HashMap::new();
    for i in 0..num {
        for j in i + 1..num {
            if !overlaps(&subsets[i], &subsets[j]) {
                continue;
            }
            let table: Vec<Vec<Option<u64>>> = all_words[i]
                .iter()
                .map(|u| all_words[j].iter().map(|v| slots_required(u, v)).collect())
                .collect();
            pair_req.insert((i, j), table);
        }
    }

    // Candidate optima are exactly the requirement values that occur.
    let mut candidates: Vec<u64> = self_req
        .iter()
        .flatten()
        .chain(pair_req.values().flatten().flatten())
        .filter_map(|&r| r)
        .collect();
    candidates.sort_unstable();
    candidates.dedup();

    let feasible = |r: u64| -> Option<Vec<usize>> {
        // Domain: words whose self requirement fits, positions kept aligned
        // with the full word list via an index map.
        let domains: Vec<Vec<usize>> = self_req
            .iter()
            .map(|reqs| {
                reqs.iter()
                    .enumerate()
                    .filter(|(_, &req)| req.is_some_and(|v| v <= r))
                    .map(|(w, _)| w)
                    .collect()
            })
            .collect();
        if domains.iter().any(|d| d.is_empty()) {
            return None;
        }
        let mut masks = HashMap::new();
        for (&(i, j), table) in &pair_req {
            let per_word: Vec<Bits> = domains[i]
                .iter()
                .map(|&wi| {
                    let mut bits = Bits::empty(domains[j].len());
                    for (pos, &wj) in domains[j].iter().enumerate() {
                        if table[wi][wj].is_some_and(|v| v <= r) {
                            bits.set(pos);
                        }
                    }
                    bits
                })
                .collect();
            masks.insert((i, j), per_word);
        }
        let sizes: Vec<usize> = domains.iter().map(|d| d.len()).collect();
        assign(num, &sizes, &masks).map(|chosen| {
            chosen.iter().zip(&domains).map(|(&pos, d)| d[pos]).collect()
        })
    };

    // Feasibility is monotone in the allowance, so binary search the
    // candidate values.
    let mut best: Option<(u64, Vec<usize>)> = None;
    let (mut lo, mut hi) = (0usize, candidates.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        match feasible(candidates[mid]) {
            Some(words) => {
                best = Some((candidates[mid], words));
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }

    Ok(match best {
        Some((slots, chosen)) => OracleResult {
            n,
            k,
            cap: period_cap,
            optimal_slots: Some(slots),
            witness: Some(
                subsets
                    .iter()
                    .enumerate()
                    .map(|(i, s)| WitnessEntry { set: s.clone(), word: all_words[i][chosen[i]].clone() })
                    .collect(),
            ),
        },
        None => OracleResult { n, k, cap: period_cap, optimal_slots: None, witness: None },
    })
}
