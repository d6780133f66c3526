//! Single-round rendezvous maximization on graphs.
//!
//! When every channel set has exactly two elements, agents are edges of a
//! graph and picking a channel orients the edge toward it. Two agents meet
//! in the round exactly when their edges point into a shared vertex (an
//! in-pair). Orienting uniformly at random wins a quarter of all incident
//! pairs in expectation; lifting orientations to unit vectors, maximizing a
//! cut-style objective over the sphere, and rounding with random
//! hyperplanes — keeping the better of each rounding and its global flip —
//! pushes the guarantee to 0.439 of the best achievable in-pair count.

mod sdp;

pub use sdp::{hyperplane_round, solve_sdp, SdpInstance, SolveParams, SolveReport};

use serde::Serialize;

use crate::rng::mix2;
use crate::{Error, Result};

/// A simple undirected graph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Graph {
    n: u32,
    /// Edges as `(lo, hi)` pairs, `lo < hi`.
    edges: Vec<(u32, u32)>,
}

impl Graph {
    pub fn new(n: u32, edges: Vec<(u32, u32)>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) outside [1, {n}]")));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        for w in normalized.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidGraph(format!("duplicate edge {:?}", w[0])));
            }
        }
        Ok(Self { n, edges: normalized })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Per-edge orientation bits: `false` points toward the smaller endpoint,
/// `true` toward the larger.
pub type Orientation = Vec<bool>;

/// Head vertex of edge `e` under orientation bit `bit`.
fn head(e: (u32, u32), bit: bool) -> u32 {
    if bit {
        e.1
    } else {
        e.0
    }
}

fn degree_pairs(degrees: &[u64]) -> u64 {
    degrees.iter().map(|&d| d * (d.saturating_sub(1)) / 2).sum()
}

fn indegrees(g: &Graph, orientation: &Orientation) -> Vec<u64> {
    assert_eq!(orientation.len(), g.edge_count());
    let mut indeg = vec![0u64; g.n as usize + 1];
    for (e, &bit) in g.edges.iter().zip(orientation) {
        indeg[head(*e, bit) as usize] += 1;
    }
    indeg
}

/// Pairs of incident edges both pointing into their shared vertex.
pub fn count_in_pairs(g: &Graph, orientation: &Orientation) -> u64 {
    degree_pairs(&indegrees(g, orientation))
}

/// Pairs of incident edges both pointing out of their shared vertex.
pub fn count_out_pairs(g: &Graph, orientation: &Orientation) -> u64 {
    let flipped: Orientation = orientation.iter().map(|b| !b).collect();
    count_in_pairs(g, &flipped)
}

/// All unordered pairs of incident edges, regardless of orientation.
pub fn count_incident_pairs(g: &Graph) -> u64 {
    let mut deg = vec![0u64; g.n as usize + 1];
    for (a, b) in &g.edges {
        deg[*a as usize] += 1;
        deg[*b as usize] += 1;
    }
    degree_pairs(&deg)
}

/// Incident pairs pointing neither jointly in nor jointly out.
pub fn count_cross_pairs(g: &Graph, orientation: &Orientation) -> u64 {
    count_incident_pairs(g) - count_in_pairs(g, orientation) - count_out_pairs(g, orientation)
}

/// Orients each edge by an independent fair coin derived from `seed`.
pub fn random_orientation(g: &Graph, seed: u64) -> Orientation {
    (0..g.edge_count()).map(|i| mix2(seed, i as u64) & 1 == 1).collect()
}

/// Largest edge count accepted by [`brute_force_optimal`].
pub const BRUTE_FORCE_EDGE_CAP: usize = 20;

/// Exact maximum of [`count_in_pairs`] over all `2^|E|` orientations.
pub fn brute_force_optimal(g: &Graph) -> Result<(u64, Orientation)> {
    let m = g.edge_count();
    if m > BRUTE_FORCE_EDGE_CAP {
        return Err(Error::InstanceTooLarge(format!(
            "{m} edges exceeds brute-force cap {BRUTE_FORCE_EDGE_CAP}"
        )));
    }
    let mut best = 0u64;
    let mut witness = vec![false; m];
    for mask in 0u32..1 << m {
        let orientation: Orientation = (0..m).map(|i| mask >> i & 1 == 1).collect();
        let score = count_in_pairs(g, &orientation);
        if score > best || mask == 0 {
            best = score;
            witness = orientation;
        }
    }
    Ok((best, witness))
}

/// Output of [`orient_one_round`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OneRoundResult {
    pub orientation: Orientation,
    pub in_pairs: u64,
    pub incident_pairs: u64,
    /// Objective value reached by the vector relaxation.
    pub sdp_objective: f64,
}

/// Builds and solves the orientation relaxation, rounds it with `rounds`
/// independent hyperplanes, and returns the candidate — each rounding and
/// its global flip — with the most in-pairs.
pub fn orient_one_round(g: &Graph, seed: u64, rounds: u32) -> OneRoundResult {
    let initial: Orientation = vec![false; g.edge_count()];
    let incident_pairs = count_incident_pairs(g);
    if g.edge_count() == 0 || rounds == 0 {
        let in_pairs = count_in_pairs(g, &initial);
        return OneRoundResult { orientation: initial, in_pairs, incident_pairs, sdp_objective: 0.0 };
    }

    let mut inst = SdpInstance::build(g, &initial);
    let params = SolveParams::default_for(&inst, seed);
    let report = solve_sdp(&mut inst, &params);

    let mut best: Option<(u64, Orientation)> = None;
    for round in 0..rounds {
        let flips = hyperplane_round(&inst, mix2(seed, 0x9d5c_0000 + round as u64));
        let rounded: Orientation =
            initial.iter().zip(&flips).map(|(&b, &f)| b ^ f).collect();
        let flipped: Orientation = rounded.iter().map(|&b| !b).collect();
        for cand in [rounded, flipped] {
            let score = count_in_pairs(g, &cand);
            if best.as_ref().is_none_or(|(s, _)| score > *s) {
                best = Some((score, cand));
            }
        }
    }
    let (in_pairs, orientation) = best.unwrap();
    OneRoundResult { orientation, in_pairs, incident_pairs, sdp_objective: report.objective }
}
