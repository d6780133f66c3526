//! Edge coloring of the linear order on channels.
//!
//! Channels `1..=n` form a directed graph with an edge `(a, b)` for every
//! `a < b`. Coloring each edge with a bit position from the binary expansion
//! of its endpoints guarantees that no directed path of length two is
//! monochromatic: the color of `(a, b)` is chosen outside the bit set of
//! `a`, while the color of any edge leaving `b` is chosen outside the bit
//! set of `b` — and hence differs from any color inside it.
//!
//! Bit sets are taken from the zero-based channel index `k - 1`, which keeps
//! every color within a palette of size `max(1, ceil_log2(n))` for all `n`,
//! including powers of two. Two-channel sets are edges here, and the color
//! picks which codeword the pair schedule hops by.

use crate::strings::ceil_log2;
use crate::{Error, Result};

/// Largest color index the construction can emit for universe size `n`.
pub fn palette_size(n: u32) -> u32 {
    ceil_log2(n as u64).unwrap_or(0).max(1)
}

fn check_channel(k: u32, n: u32) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidChannel { channel: k, n });
    }
    Ok(())
}

/// Bit set of channel `k`: the 1-indexed positions (least significant = 1)
/// of the set bits in the binary expansion of `k - 1`.
pub fn bit_set(k: u32, n: u32) -> Result<Vec<u32>> {
    check_channel(k, n)?;
    let mut v = k - 1;
    let mut out = Vec::new();
    while v != 0 {
        out.push(v.trailing_zeros() + 1);
        v &= v - 1;
    }
    Ok(out)
}

/// Color of the edge `(a, b)`, `a < b`: the smallest element of
/// `bit_set(b) \ bit_set(a)`, which is nonempty because `a < b`.
pub fn color_edge(a: u32, b: u32, n: u32) -> Result<u32> {
    check_channel(a, n)?;
    check_channel(b, n)?;
    if a >= b {
        return Err(Error::InvalidEdge(format!("requires a < b, got ({a}, {b})")));
    }
    let diff = (b - 1) & !(a - 1);
    debug_assert!(diff != 0);
    Ok(diff.trailing_zeros() + 1)
}

/// Largest `n` accepted by [`verify_ramsey`]; the check is cubic in `n`.
pub const VERIFY_CAP: u32 = 512;

/// First triple `a < b < c` whose path edges `(a, b)` and `(b, c)` receive
/// the same color under `color`, if any.
pub fn find_ramsey_violation<F>(n: u32, color: F) -> Option<(u32, u32, u32)>
where
    F: Fn(u32, u32) -> u32,
{
    let mut cache = vec![0u32; (n as usize + 1) * (n as usize + 1)];
    for a in 1..=n {
        for b in a + 1..=n {
            cache[(a as usize) * (n as usize + 1) + b as usize] = color(a, b);
        }
    }
    let at = |a: u32, b: u32| cache[(a as usize) * (n as usize + 1) + b as usize];
    for b in 2..n {
        for a in 1..b {
            for c in b + 1..=n {
                if at(a, b) == at(b, c) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Exhaustively checks that no directed path of length two is monochromatic.
pub fn verify_ramsey(n: u32) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidChannel { channel: n, n });
    }
    if n > VERIFY_CAP {
        return Err(Error::VerificationCapExceeded { n, cap: VERIFY_CAP });
    }
    Ok(find_ramsey_violation(n, |a, b| color_edge(a, b, n).unwrap()).is_none())
}
