//! Combinatorics on binary strings.
//!
//! A two-channel hopping schedule is a binary string: bit 0 means "hop on
//! the smaller channel", bit 1 the larger. Two cyclic schedules meet under
//! every pair of wake offsets exactly when certain coordinate pairs occur
//! under every pair of rotations, so the heart of the construction is an
//! injective encoding `encode_async` whose images are balanced, strictly
//! Catalan and 2-maximal — enough to force those conditions.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A finite sequence over {0, 1}.
///
/// Displays and serializes as an ASCII string of '0'/'1' characters.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn empty() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![false; n] }
    }

    pub fn ones(n: usize) -> Self {
        Self { bits: vec![true; n] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Number of 1 symbols.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Coordinatewise negation.
    pub fn complemented(&self) -> Self {
        Self { bits: self.bits.iter().map(|b| !b).collect() }
    }

    /// Concatenation of `parts` in order.
    pub fn concat(parts: &[&BitString]) -> Self {
        let mut bits = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
        for p in parts {
            bits.extend_from_slice(&p.bits);
        }
        Self { bits }
    }

    /// Left rotation by `i` positions: the symbol at index `i mod len`
    /// becomes first. Rejects the empty string.
    pub fn rotated_left(&self, i: usize) -> Result<Self> {
        if self.is_empty() {
            return Err(Error::EmptyInput);
        }
        let n = self.len();
        let i = i % n;
        let mut bits = Vec::with_capacity(n);
        bits.extend_from_slice(&self.bits[i..]);
        bits.extend_from_slice(&self.bits[..i]);
        Ok(Self { bits })
    }

    /// Copy of the substring at `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self { bits: self.bits[range].to_vec() }
    }

    /// The value of the string read as a big-endian binary numeral.
    pub fn to_value(&self) -> u64 {
        assert!(self.len() <= 64, "bit string too long for u64");
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// All `2^len` strings of the given length, in numeric order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 32);
        (0u32..1 << len).map(move |v| {
            BitString::new((0..len).rev().map(|i| v >> i & 1 == 1).collect())
        })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(Error::InvalidBitChar(other)),
            }
        }
        Ok(Self { bits })
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Prefix-sum walk of a string: symbol 1 steps up, 0 steps down.
///
/// `values()[k]` is the height after the first `k` symbols, so the profile
/// has one more entry than the string has symbols and starts at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkProfile {
    values: Vec<i64>,
}

impl WalkProfile {
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn last(&self) -> i64 {
        *self.values.last().unwrap()
    }

    /// Maximum height, taken over indices `1..=len`.
    pub fn max(&self) -> i64 {
        self.values[1..].iter().copied().max().unwrap()
    }

    /// Minimum height, taken over indices `0..len`.
    pub fn min(&self) -> i64 {
        let n = self.values.len();
        self.values[..n - 1].iter().copied().min().unwrap()
    }
}

/// The walk profile of `z`. The empty string yields the single value `[0]`.
pub fn walk(z: &BitString) -> WalkProfile {
    let mut values = Vec::with_capacity(z.len() + 1);
    let mut h = 0i64;
    values.push(h);
    for b in z.iter() {
        h += if b { 1 } else { -1 };
        values.push(h);
    }
    WalkProfile { values }
}

/// Ceiling of log2. Returns 0 for n = 1; rejects n = 0.
pub fn ceil_log2(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(64 - (n - 1).leading_zeros())
}

/// Big-endian binary encoding of `x` at exactly `width` bits.
///
/// Panics if `x` does not fit; internal call sites choose widths that hold
/// the full value range.
pub(crate) fn bits_fixed(x: u64, width: u32) -> BitString {
    assert!(width >= 1 && (width >= 64 || x < 1u64 << width), "{x} does not fit in {width} bits");
    BitString::new((0..width).rev().map(|i| x >> i & 1 == 1).collect())
}

/// Binary encoding of `x`, zero-padded on the left to `max(1, ceil_log2(m))`
/// where `m` is the largest value `x` may take. Values whose natural binary
/// form is longer than the pad keep their natural length, so the map stays
/// injective over `[0, m]`.
pub fn bin_encode(x: u64, m: u64) -> Result<BitString> {
    if m == 0 {
        return Err(Error::ZeroArgument);
    }
    if x > m {
        return Err(Error::ValueExceedsMax { value: x, max: m });
    }
    let pad = ceil_log2(m)?.max(1);
    let natural = if x <= 1 { 1 } else { ceil_log2(x + 1)? };
    Ok(bits_fixed(x, pad.max(natural)))
}

/// Equal counts of 0s and 1s.
pub fn is_balanced(z: &BitString) -> bool {
    2 * z.weight() == z.len()
}

/// Balanced, and the walk never goes below zero.
pub fn is_catalan(z: &BitString) -> bool {
    if !is_balanced(z) {
        return false;
    }
    walk(z).values().iter().all(|&v| v >= 0)
}

/// Balanced, and the walk is strictly positive at every interior index.
pub fn is_strictly_catalan(z: &BitString) -> bool {
    if z.is_empty() || !is_balanced(z) {
        return z.is_empty();
    }
    let w = walk(z);
    let v = w.values();
    v[1..v.len() - 1].iter().all(|&h| h > 0) && w.last() == 0
}

/// Number of indices in `1..=len` at which the walk attains its maximum.
pub fn peak_count(z: &BitString) -> Result<usize> {
    if z.is_empty() {
        return Err(Error::EmptyInput);
    }
    let w = walk(z);
    let m = w.max();
    Ok(w.values()[1..].iter().filter(|&&v| v == m).count())
}

/// Number of indices in `0..len` at which the walk attains its minimum.
///
/// Counting stops one short of the final index so that each cyclic position
/// is counted once; a strictly Catalan string is then 1-minimal, with its
/// minimum at index 0.
pub fn valley_count(z: &BitString) -> Result<usize> {
    if z.is_empty() {
        return Err(Error::EmptyInput);
    }
    let w = walk(z);
    let m = w.min();
    let v = w.values();
    Ok(v[..v.len() - 1].iter().filter(|&&h| h == m).count())
}

fn check_equal_len(r: &BitString, s: &BitString) -> Result<()> {
    if r.len() != s.len() {
        return Err(Error::LengthMismatch { left: r.len(), right: s.len() });
    }
    Ok(())
}

/// Both agreeing pairs (0,0) and (1,1) occur coordinatewise between `r` and `s`.
///
/// For two sets sharing their smallest or largest channel this forces a slot
/// on the shared channel.
pub fn agrees_both_ways(r: &BitString, s: &BitString) -> Result<bool> {
    check_equal_len(r, s)?;
    let mut zz = false;
    let mut oo = false;
    for (a, b) in r.iter().zip(s.iter()) {
        zz |= !a && !b;
        oo |= a && b;
    }
    Ok(zz && oo)
}

/// Both disagreeing pairs (0,1) and (1,0) occur coordinatewise between `r` and `s`.
///
/// For two sets forming a directed path (the larger of one is the smaller of
/// the other) this forces a slot on the shared channel.
pub fn differs_both_ways(r: &BitString, s: &BitString) -> Result<bool> {
    check_equal_len(r, s)?;
    let mut zo = false;
    let mut oz = false;
    for (a, b) in r.iter().zip(s.iter()) {
        zo |= !a && b;
        oz |= a && !b;
    }
    Ok(zo && oz)
}

/// Whether the given coordinate-pair condition holds for every pair of
/// rotations of `r` and `s`.
///
/// For equal lengths the realized pair set under rotations (i, j) depends
/// only on (j - i) mod len, so it suffices to sweep one relative shift.
fn cyclic_over_rotations(
    r: &BitString,
    s: &BitString,
    cond: fn(&BitString, &BitString) -> Result<bool>,
) -> Result<bool> {
    check_equal_len(r, s)?;
    if r.is_empty() {
        return Err(Error::EmptyInput);
    }
    for d in 0..s.len() {
        if !cond(r, &s.rotated_left(d)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `agrees_both_ways` under every pair of rotations.
pub fn agrees_both_ways_cyclic(r: &BitString, s: &BitString) -> Result<bool> {
    cyclic_over_rotations(r, s, agrees_both_ways)
}

/// `differs_both_ways` under every pair of rotations.
pub fn differs_both_ways_cyclic(r: &BitString, s: &BitString) -> Result<bool> {
    cyclic_over_rotations(r, s, differs_both_ways)
}

/// Width of the weight field in `encode_sync` for inputs of length `len`:
/// wide enough to hold every weight in `[0, len]` in ordinary binary, so
/// that for any two weights n < m some coordinate has a 0 in n and a 1 in m.
fn weight_width(len: usize) -> u32 {
    ceil_log2(len as u64 + 1).unwrap().max(1)
}

/// Codeword for the aligned-clock case: `01 ∘ x ∘ complement(weight(x))`.
///
/// The 01 prefix realizes both agreeing pairs against any other codeword of
/// the same length; the complemented fixed-width weight field realizes both
/// disagreeing pairs whenever the inputs differ.
pub fn encode_sync(x: &BitString) -> Result<BitString> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    let prefix: BitString = "01".parse().unwrap();
    let wt = bits_fixed(x.weight() as u64, weight_width(x.len()));
    Ok(BitString::concat(&[&prefix, x, &wt.complemented()]))
}

/// Balancing map: `x ∘ complement(x)`. Injective, output balanced, length doubled.
pub fn balance(x: &BitString) -> Result<BitString> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(BitString::concat(&[x, &x.complemented()]))
}

/// Rotates a balanced string to a Catalan one.
///
/// Returns `(c, w)` where `c` is the smallest index attaining the minimum of
/// the walk and `w` is the left rotation by `c`. Rotating at a minimum lifts
/// the whole walk to nonnegative heights.
pub fn rotate_to_catalan(z: &BitString) -> Result<(usize, BitString)> {
    if z.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !is_balanced(z) {
        return Err(Error::NotBalanced);
    }
    let w = walk(z);
    let m = w.min();
    let c = w.values().iter().position(|&v| v == m).unwrap();
    Ok((c, z.rotated_left(c)?))
}

/// Injective Catalan form of a balanced string.
///
/// Rotates `z` to its Catalan shift and appends the shift index, balanced and
/// framed as `1^(l/2) ∘ balance(shift bits) ∘ 0^(l/2)` so the suffix is itself
/// Catalan and the whole output stays balanced and Catalan.
pub fn encode_catalan(z: &BitString) -> Result<BitString> {
    if z.len() < 2 {
        return Err(if z.is_empty() { Error::EmptyInput } else { Error::NotBalanced });
    }
    let (c, w) = rotate_to_catalan(z)?;
    let shift_bits = bin_encode(c as u64, z.len() as u64 - 1)?;
    let tagged = balance(&shift_bits)?;
    let half = tagged.len() / 2;
    Ok(BitString::concat(&[&w, &BitString::ones(half), &tagged, &BitString::zeros(half)]))
}

/// Leftmost index at which the walk of `z` attains its maximum.
fn leftmost_peak(z: &BitString) -> usize {
    let w = walk(z);
    let m = w.max();
    w.values().iter().position(|&v| v == m).unwrap()
}

/// Inserts `1010` immediately after the leftmost maximum of the walk.
///
/// The two inserted peaks rise one above the old maximum, so the result is
/// 2-maximal regardless of how many maxima the input had, and the insertion
/// point can be recovered from the leftmost of the two new peaks.
pub fn make_two_maximal(z: &BitString) -> Result<BitString> {
    if !is_strictly_catalan(z) || z.is_empty() {
        return Err(Error::NotStrictlyCatalan);
    }
    let q = leftmost_peak(z);
    let insert: BitString = "1010".parse().unwrap();
    Ok(BitString::concat(&[&z.slice(0..q), &insert, &z.slice(q..z.len())]))
}

/// Full encoding pipeline with the intermediate indices retained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EncodingRecord {
    pub input: BitString,
    pub output: BitString,
    /// Catalan shift applied to the balanced form of the input.
    pub shift: usize,
    /// Symbol index at which `1010` was inserted.
    pub insertion_index: usize,
}

/// Codeword for the free-running case: balanced, strictly Catalan, 2-maximal.
///
/// Distinct inputs of equal length yield codewords realizing both
/// disagreeing pairs under every pair of rotations; every codeword realizes
/// both agreeing pairs against itself under every pair of rotations. Length
/// is `2·len + 4·max(1, ceil_log2(2·len)) + 6`.
pub fn encode_async(x: &BitString) -> Result<BitString> {
    Ok(encode_async_record(x)?.output)
}

/// As [`encode_async`], also reporting the shift and insertion indices.
pub fn encode_async_record(x: &BitString) -> Result<EncodingRecord> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    let balanced = balance(x)?;
    let (shift, _) = rotate_to_catalan(&balanced)?;
    let tagged = encode_catalan(&balanced)?;
    let one = BitString::ones(1);
    let zero = BitString::zeros(1);
    let wrapped = BitString::concat(&[&one, &tagged, &zero]);
    let insertion_index = leftmost_peak(&wrapped);
    let output = make_two_maximal(&wrapped)?;
    Ok(EncodingRecord { input: x.clone(), output, shift, insertion_index })
}

/// Codeword length produced by [`encode_async`] for inputs of length `len`.
pub fn encode_async_len(len: usize) -> usize {
    2 * len + 4 * ceil_log2(2 * len as u64).unwrap().max(1) as usize + 6
}

fn bad(reason: &str) -> Error {
    Error::NotACodeword(reason.to_string())
}

/// Inverts [`encode_async`], rejecting strings outside its image.
pub fn decode_async(w: &BitString) -> Result<BitString> {
    // Peel the 1010 insertion: the maxima of a codeword are exactly the two
    // inserted peaks, two apart, with the insertion starting one symbol
    // before the first.
    if w.len() < 10 {
        return Err(bad("shorter than any codeword"));
    }
    let profile = walk(w);
    let m = profile.max();
    let peaks: Vec<usize> =
        (1..=w.len()).filter(|&i| profile.values()[i] == m).collect();
    if peaks.len() != 2 || peaks[1] != peaks[0] + 2 {
        return Err(bad("maxima do not form an inserted double peak"));
    }
    let q = peaks[0] - 1;
    let inserted = w.slice(q..q + 4);
    if inserted != "1010".parse().unwrap() {
        return Err(bad("inserted block is not 1010"));
    }
    let wrapped = BitString::concat(&[&w.slice(0..q), &w.slice(q + 4..w.len())]);
    if !is_strictly_catalan(&wrapped) {
        return Err(bad("core is not strictly Catalan"));
    }

    // Strip the 1 ... 0 frame.
    if !wrapped.bit(0) || wrapped.bit(wrapped.len() - 1) {
        return Err(bad("missing 1...0 frame"));
    }
    let tagged = wrapped.slice(1..wrapped.len() - 1);

    // Solve for the balanced-core length: |tagged| = 2m + 4·max(1, ceil_log2(2m)).
    let total = tagged.len();
    let mut half_len = None;
    for m in 1..=total / 2 {
        let expect = 2 * m + 4 * ceil_log2(2 * m as u64).unwrap().max(1) as usize;
        if expect == total {
            half_len = Some(m);
            break;
        }
        if expect > total {
            break;
        }
    }
    let m = half_len.ok_or_else(|| bad("length matches no codeword"))?;
    let z_len = 2 * m;
    let field = ceil_log2(z_len as u64).unwrap().max(1) as usize;

    // Split: rotated core, 1-pad, shift tag and its complement, 0-pad.
    let rotated = tagged.slice(0..z_len);
    let pad1 = tagged.slice(z_len..z_len + field);
    let shift_bits = tagged.slice(z_len + field..z_len + 2 * field);
    let shift_compl = tagged.slice(z_len + 2 * field..z_len + 3 * field);
    let pad0 = tagged.slice(z_len + 3 * field..total);
    if pad1 != BitString::ones(field) || pad0 != BitString::zeros(field) {
        return Err(bad("pad fields malformed"));
    }
    if shift_compl != shift_bits.complemented() {
        return Err(bad("shift tag not balanced against its complement"));
    }
    let c = shift_bits.to_value() as usize;
    if c >= z_len {
        return Err(bad("shift index out of range"));
    }

    // Undo the Catalan rotation and the balancing map.
    let balanced = rotated.rotated_left(z_len - c)?;
    let input = balanced.slice(0..m);
    if balanced.slice(m..z_len) != input.complemented() {
        return Err(bad("core is not in the image of the balancing map"));
    }

    // Canonicality (leftmost minimum shift, leftmost peak insertion) is
    // cheapest to confirm by re-encoding.
    if encode_async(&input)? != *w {
        return Err(bad("string is not a canonical codeword"));
    }
    Ok(input)
}
