//! Terminator-completed symbol sequences and deterministic text generators.
//!
//! A [`Text`] maps input bytes onto a dense internal alphabet: the terminator
//! gets rank 0 and occurs exactly once, at the final position; the remaining
//! bytes get ranks `1..=sigma` in byte order, so rank order preserves byte
//! order. Every rank in `1..=sigma` occurs at least once.
//!
//! A [`SentinelConcat`] is `r` copies of a base text, each copy closed by a
//! marker symbol. Two views exist:
//!
//! * the *marked* view (what is written to disk): inner markers share one
//!   rank, the final marker ranks strictly above them, and both rank strictly
//!   below every regular symbol;
//! * the *comparison* view (what every suffix-sorting component consumes):
//!   all `r` markers collapse onto a single rank and the sequence is closed by
//!   one occurrence of a maximal end symbol. Under plain lexicographic
//!   comparison this makes each copy's suffix an exact prefix of the previous
//!   copy's suffix, ordered earlier-copy-first, which is what gives repeated
//!   copies their fully reducible LCP structure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Terminator byte reserved in loaded inputs (configurable per load).
pub const DEFAULT_TERMINATOR_BYTE: u8 = 0x00;
/// Byte rendering of inner copy markers in marked concatenation files.
pub const INNER_MARKER_BYTE: u8 = 0x01;
/// Byte rendering of the final copy marker in marked concatenation files.
pub const FINAL_MARKER_BYTE: u8 = 0x02;
/// Byte rendering of the comparison-view end symbol.
pub const END_SENTINEL_BYTE: u8 = 0x03;

/// Largest regular alphabet representable through the byte mapping.
pub const MAX_SIGMA: u32 = 255;

/// Bijection between internal symbol ranks and external bytes.
///
/// Only regular symbols participate in pattern lookup; terminator and marker
/// ranks have byte renderings (for display) but never match pattern bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetMap {
    /// Byte rendering per rank, indexed by rank (`0..total_ranks`).
    bytes: Vec<u8>,
    /// First regular rank (inclusive).
    regular_lo: u32,
    /// Last regular rank (inclusive).
    regular_hi: u32,
    /// Byte -> rank for regular symbols; `u16::MAX` marks unmapped bytes.
    to_rank: Box<[u16; 256]>,
}

impl AlphabetMap {
    pub fn new(bytes: Vec<u8>, regular_lo: u32, regular_hi: u32) -> Self {
        assert!(regular_lo as usize <= bytes.len() && (regular_hi as usize) < bytes.len());
        let mut to_rank = Box::new([u16::MAX; 256]);
        for rank in regular_lo..=regular_hi {
            to_rank[bytes[rank as usize] as usize] = rank as u16;
        }
        AlphabetMap {
            bytes,
            regular_lo,
            regular_hi,
            to_rank,
        }
    }

    /// Number of symbol ranks including terminator/marker ranks.
    pub fn total_ranks(&self) -> u32 {
        self.bytes.len() as u32
    }

    /// Number of regular (pattern-matchable) symbols.
    pub fn regular_count(&self) -> u32 {
        self.regular_hi - self.regular_lo + 1
    }

    pub fn regular_range(&self) -> (u32, u32) {
        (self.regular_lo, self.regular_hi)
    }

    /// Rank of a regular byte, or `None` for bytes outside the text alphabet.
    pub fn rank_of_byte(&self, byte: u8) -> Option<u32> {
        let r = self.to_rank[byte as usize];
        (r != u16::MAX).then_some(r as u32)
    }

    /// Byte rendering of any rank.
    pub fn byte_of_rank(&self, rank: u32) -> u8 {
        self.bytes[rank as usize]
    }

    pub fn rank_bytes(&self) -> &[u8] {
        &self.bytes
    }
}

/// A dense-alphabet symbol sequence whose final symbol is unique, as consumed
/// by every suffix-sorting component in the crate.
///
/// Uniqueness of the final symbol guarantees that no suffix is a prefix of
/// another, so plain lexicographic comparison of symbol slices is a total
/// order on suffixes.
pub trait Indexable {
    /// Symbol ranks; `symbols()[i - 1]` is the symbol at 1-based position `i`.
    fn symbols(&self) -> &[u32];

    /// Number of distinct ranks; ranks are dense in `0..alpha_size`.
    fn alpha_size(&self) -> u32;

    /// Byte mapping for the ranks.
    fn alphabet(&self) -> &AlphabetMap;

    /// Sequence length `n` including the final terminator/end symbol.
    fn len(&self) -> usize {
        self.symbols().len()
    }

    fn is_empty(&self) -> bool {
        self.symbols().is_empty()
    }

    /// Symbol at 1-based position `i`.
    fn symbol(&self, i: usize) -> u32 {
        self.symbols()[i - 1]
    }
}

/// A loaded or generated text: regular symbols at positions `1..n`, the
/// rank-0 terminator exactly at position `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Text {
    symbols: Vec<u32>,
    sigma: u32,
    alphabet: AlphabetMap,
}

impl Indexable for Text {
    fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    fn alpha_size(&self) -> u32 {
        self.sigma + 1
    }

    fn alphabet(&self) -> &AlphabetMap {
        &self.alphabet
    }
}

impl Text {
    /// Number of regular symbols in the alphabet.
    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    /// Renders the text back to bytes, excluding the terminator.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.symbols[..self.symbols.len() - 1]
            .iter()
            .map(|&r| self.alphabet.byte_of_rank(r))
            .collect()
    }

    fn from_ranks(symbols: Vec<u32>, sigma: u32, alphabet: AlphabetMap) -> Self {
        debug_assert_eq!(*symbols.last().unwrap(), 0);
        debug_assert_eq!(alphabet.total_ranks(), sigma + 1);
        Text {
            symbols,
            sigma,
            alphabet,
        }
    }
}

/// Maps bytes onto dense ranks in byte order and appends the terminator.
///
/// Fails on empty input and on any occurrence of the reserved terminator
/// byte, reporting its offset.
pub fn load_text(bytes: &[u8], terminator_byte: u8) -> Result<Text> {
    if bytes.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(offset) = bytes.iter().position(|&b| b == terminator_byte) {
        return Err(Error::ReservedByte {
            byte: terminator_byte,
            offset,
        });
    }
    let mut present = [false; 256];
    for &b in bytes {
        present[b as usize] = true;
    }
    let mut rank_of = [0u32; 256];
    let mut map_bytes = vec![terminator_byte];
    for b in 0..256 {
        if present[b] {
            rank_of[b] = map_bytes.len() as u32;
            map_bytes.push(b as u8);
        }
    }
    let sigma = (map_bytes.len() - 1) as u32;
    let mut symbols: Vec<u32> = bytes.iter().map(|&b| rank_of[b as usize]).collect();
    symbols.push(0);
    Ok(Text::from_ranks(
        symbols,
        sigma,
        AlphabetMap::new(map_bytes, 1, sigma),
    ))
}

/// Synthesizes a byte mapping for generated texts: letters for alphabets up
/// to 26 symbols, raw rank bytes beyond that.
fn synthetic_map(sigma: u32) -> AlphabetMap {
    let mut bytes = vec![DEFAULT_TERMINATOR_BYTE];
    for rank in 1..=sigma {
        let b = if sigma <= 26 {
            b'a' + (rank - 1) as u8
        } else {
            rank as u8
        };
        bytes.push(b);
    }
    AlphabetMap::new(bytes, 1, sigma)
}

/// Generates `n` symbols drawn uniformly from a `sigma`-symbol alphabet,
/// deterministically from `seed`. The result has length `n + 1` counting the
/// terminator.
pub fn generate_random(sigma: u32, n: usize, seed: u64) -> Result<Text> {
    if sigma == 0 || sigma > MAX_SIGMA {
        return Err(Error::InvalidParameter(format!(
            "random text needs 1 <= sigma <= {MAX_SIGMA}, got {sigma}"
        )));
    }
    if n < sigma as usize {
        return Err(Error::InvalidParameter(format!(
            "random text needs n >= sigma to cover the alphabet (sigma = {sigma}, n = {n})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut symbols: Vec<u32> = (0..n).map(|_| rng.random_range(1..=sigma)).collect();
    // A dense alphabet is part of the contract; patch ranks that the draw
    // missed (only plausible for tiny n) without erasing another rank's last
    // occurrence.
    let mut counts = vec![0usize; sigma as usize + 1];
    for &s in &symbols {
        counts[s as usize] += 1;
    }
    let mut cursor = 0;
    for rank in 1..=sigma {
        if counts[rank as usize] == 0 {
            while counts[symbols[cursor] as usize] < 2 {
                cursor += 1;
            }
            counts[symbols[cursor] as usize] -= 1;
            symbols[cursor] = rank;
            counts[rank as usize] += 1;
        }
    }
    symbols.push(0);
    Ok(Text::from_ranks(symbols, sigma, synthetic_map(sigma)))
}

/// Generates the lexicographically least de Bruijn sequence of order `k` over
/// `sigma` symbols, linearized once (no wraparound padding) and closed with
/// the terminator: every length-`k` word occurs exactly once *cyclically*.
pub fn generate_de_bruijn(sigma: u32, k: u32) -> Result<Text> {
    if !(2..=MAX_SIGMA).contains(&sigma) {
        return Err(Error::InvalidParameter(format!(
            "de Bruijn sequence needs 2 <= sigma <= {MAX_SIGMA}, got {sigma}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParameter(
            "de Bruijn sequence needs order k >= 1".into(),
        ));
    }
    let len = (sigma as u128)
        .checked_pow(k)
        .filter(|&l| l <= (1u128 << 31))
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "de Bruijn sequence sigma^k too large ({sigma}^{k})"
            ))
        })? as usize;

    // Iterative form of the Lyndon-word concatenation construction.
    let k = k as usize;
    let mut a = vec![0u32; k + 1];
    let mut seq: Vec<u32> = Vec::with_capacity(len + 1);
    // Stack of (t, p, next symbol to try at slot t); symbol u32::MAX marks the
    // "extend with a[t - p]" phase.
    let mut stack: Vec<(usize, usize, u32)> = vec![(1, 1, u32::MAX)];
    while let Some((t, p, j)) = stack.pop() {
        if t > k {
            if k.is_multiple_of(p) {
                seq.extend_from_slice(&a[1..=p]);
            }
            continue;
        }
        if j == u32::MAX {
            stack.push((t, p, a[t - p] + 1));
            a[t] = a[t - p];
            stack.push((t + 1, p, u32::MAX));
        } else if j < sigma {
            stack.push((t, p, j + 1));
            a[t] = j;
            stack.push((t + 1, t, u32::MAX));
        }
    }
    debug_assert_eq!(seq.len(), len);
    let mut symbols: Vec<u32> = seq.into_iter().map(|s| s + 1).collect();
    symbols.push(0);
    Ok(Text::from_ranks(symbols, sigma, synthetic_map(sigma)))
}

/// `r` copies of a base text, each closed by a marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentinelConcat {
    base: Text,
    copies: usize,
    /// Comparison view: markers collapsed to rank 0, regular ranks unchanged,
    /// plus one maximal end symbol. Length `copies * base.len() + 1`.
    seq: Vec<u32>,
    alphabet: AlphabetMap,
}

impl Indexable for SentinelConcat {
    fn symbols(&self) -> &[u32] {
        &self.seq
    }

    fn alpha_size(&self) -> u32 {
        self.base.sigma() + 2
    }

    fn alphabet(&self) -> &AlphabetMap {
        &self.alphabet
    }
}

impl SentinelConcat {
    pub fn base(&self) -> &Text {
        &self.base
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    /// Length of one copy, marker included.
    pub fn copy_len(&self) -> usize {
        self.base.len()
    }

    /// Rank of the `r - 1` inner markers in the marked view.
    pub fn inner_marker_rank(&self) -> u32 {
        0
    }

    /// Rank of the final marker in the marked view: above the inner rank,
    /// below every regular symbol.
    pub fn final_marker_rank(&self) -> u32 {
        1
    }

    /// Marked view of the concatenation: length `copies * base.len()`, marker
    /// at every position that is a multiple of the base length, regular ranks
    /// shifted up by one to sit above both marker ranks.
    pub fn marked_symbols(&self) -> Vec<u32> {
        let n = self.base.len();
        let mut out = Vec::with_capacity(self.copies * n);
        for copy in 0..self.copies {
            let marker = if copy + 1 == self.copies {
                self.final_marker_rank()
            } else {
                self.inner_marker_rank()
            };
            for &s in &self.base.symbols()[..n - 1] {
                out.push(s + 1);
            }
            out.push(marker);
        }
        out
    }

    /// Byte rendering of the marked view.
    pub fn to_marked_bytes(&self) -> Vec<u8> {
        let n = self.base.len();
        let base_bytes = self.base.to_bytes();
        let mut out = Vec::with_capacity(self.copies * n);
        for copy in 0..self.copies {
            out.extend_from_slice(&base_bytes);
            out.push(if copy + 1 == self.copies {
                FINAL_MARKER_BYTE
            } else {
                INNER_MARKER_BYTE
            });
        }
        out
    }

    /// Parses a marked byte rendering produced by [`Self::to_marked_bytes`].
    pub fn from_marked_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.is_empty() || *bytes.last().unwrap() != FINAL_MARKER_BYTE {
            return Err(Error::InvalidParameter(
                "marked concatenation must end with the final marker byte".into(),
            ));
        }
        let mut segments = Vec::new();
        let mut start = 0;
        for (i, &b) in bytes.iter().enumerate() {
            if b == INNER_MARKER_BYTE || b == FINAL_MARKER_BYTE {
                if b == FINAL_MARKER_BYTE && i + 1 != bytes.len() {
                    return Err(Error::InvalidParameter(
                        "final marker byte occurs before the end of the input".into(),
                    ));
                }
                segments.push(&bytes[start..i]);
                start = i + 1;
            }
        }
        let first = segments[0];
        if segments.len() < 2 || segments.iter().any(|s| *s != first) {
            return Err(Error::InvalidParameter(
                "marked concatenation must hold at least two identical copies".into(),
            ));
        }
        let base = load_text(first, DEFAULT_TERMINATOR_BYTE)?;
        generate_concat(&base, segments.len())
    }
}

/// Builds the `r`-copy concatenation of `base`.
pub fn generate_concat(base: &Text, copies: usize) -> Result<SentinelConcat> {
    if copies < 2 {
        return Err(Error::InvalidParameter(format!(
            "concatenation needs at least 2 copies, got {copies}"
        )));
    }
    for rank in 1..=base.sigma() {
        let b = base.alphabet().byte_of_rank(rank);
        if b == INNER_MARKER_BYTE || b == FINAL_MARKER_BYTE || b == END_SENTINEL_BYTE {
            return Err(Error::InvalidParameter(format!(
                "concatenation base alphabet uses reserved byte 0x{b:02x}"
            )));
        }
    }
    let n = base.len();
    copies
        .checked_mul(n)
        .filter(|&t| t < (1usize << 31))
        .ok_or_else(|| Error::InvalidParameter("concatenation too large".into()))?;

    let sigma = base.sigma();
    let mut seq = Vec::with_capacity(copies * n + 1);
    for _ in 0..copies {
        seq.extend_from_slice(base.symbols());
    }
    seq.push(sigma + 1);

    let mut bytes = vec![INNER_MARKER_BYTE];
    for rank in 1..=sigma {
        bytes.push(base.alphabet().byte_of_rank(rank));
    }
    bytes.push(END_SENTINEL_BYTE);
    let alphabet = AlphabetMap::new(bytes, 1, sigma);
    Ok(SentinelConcat {
        base: base.clone(),
        copies,
        seq,
        alphabet,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_maps_bytes_in_order() {
        let t = load_text(b"banana", 0).unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(t.sigma(), 3);
        // a < b < n in byte order -> ranks 1, 2, 3; terminator rank 0 last.
        assert_eq!(t.symbols(), &[2, 1, 3, 1, 3, 1, 0]);
        assert_eq!(t.symbol(1), 2);
        assert_eq!(t.symbol(7), 0);
        assert_eq!(t.to_bytes(), b"banana");
        assert_eq!(t.alphabet().rank_of_byte(b'n'), Some(3));
        assert_eq!(t.alphabet().rank_of_byte(b'z'), None);
    }

    #[test]
    fn load_rejects_empty_and_reserved() {
        assert!(matches!(load_text(b"", 0), Err(Error::EmptyInput)));
        let err = load_text(b"ab\0cd", 0).unwrap_err();
        match err {
            Error::ReservedByte { byte, offset } => {
                assert_eq!(byte, 0);
                assert_eq!(offset, 2);
            }
            other => panic!("unexpected error: {other}"),
        }
        // A different reserved byte is fine as long as it stays out of the input.
        assert!(load_text(b"ab\0cd", b'x').is_ok());
    }

    #[test]
    fn random_text_is_deterministic_and_dense() {
        let a = generate_random(4, 1000, 7).unwrap();
        let b = generate_random(4, 1000, 7).unwrap();
        assert_eq!(a, b);
        let c = generate_random(4, 1000, 8).unwrap();
        assert_ne!(a, c);
        let mut seen = [false; 5];
        for &s in &a.symbols()[..1000] {
            assert!((1..=4).contains(&s));
            seen[s as usize] = true;
        }
        assert!(seen[1..].iter().all(|&x| x));
    }

    #[test]
    fn random_text_frequencies_are_near_uniform() {
        let t = generate_random(4, 100_000, 7).unwrap();
        let mut counts = [0usize; 5];
        for &s in &t.symbols()[..100_000] {
            counts[s as usize] += 1;
        }
        for &c in &counts[1..] {
            let freq = c as f64 / 100_000.0;
            assert!(
                (freq - 0.25).abs() < 0.25 * 0.05,
                "frequency {freq} too far from 1/4"
            );
        }
    }

    #[test]
    fn de_bruijn_small_orders() {
        let t = generate_de_bruijn(2, 1).unwrap();
        assert_eq!(t.symbols(), &[1, 2, 0]);

        let t = generate_de_bruijn(2, 3).unwrap();
        // Lexicographically least binary sequence of order 3.
        assert_eq!(t.symbols(), &[1, 1, 1, 2, 1, 2, 2, 2, 0]);
        assert_eq!(t.len(), 9);
    }

    #[test]
    fn de_bruijn_windows_are_cyclically_unique() {
        for (sigma, k) in [(2u32, 6u32), (3, 4), (4, 3)] {
            let t = generate_de_bruijn(sigma, k).unwrap();
            let body = &t.symbols()[..t.len() - 1];
            let len = sigma.pow(k) as usize;
            assert_eq!(body.len(), len);
            let mut seen = std::collections::HashSet::new();
            for i in 0..len {
                let word: Vec<u32> = (0..k as usize).map(|j| body[(i + j) % len]).collect();
                assert!(seen.insert(word), "duplicate window at {i}");
            }
            assert_eq!(seen.len(), len);
        }
    }

    #[test]
    fn de_bruijn_rejects_degenerate_parameters() {
        assert!(generate_de_bruijn(2, 0).is_err());
        assert!(generate_de_bruijn(1, 3).is_err());
        assert!(generate_de_bruijn(2, 40).is_err());
    }

    #[test]
    fn concat_views() {
        let base = load_text(b"banana", 0).unwrap();
        let c = generate_concat(&base, 2).unwrap();

        // Marked view: b a n a n a # b a n a n a $ with # < $ < a.
        let marked = c.marked_symbols();
        assert_eq!(marked.len(), 14);
        assert_eq!(c.inner_marker_rank(), 0);
        assert_eq!(c.final_marker_rank(), 1);
        assert_eq!(marked, vec![3, 2, 4, 2, 4, 2, 0, 3, 2, 4, 2, 4, 2, 1]);
        assert!(c.inner_marker_rank() < c.final_marker_rank());
        assert!(c.final_marker_rank() < 2);

        // Comparison view: markers share rank 0, unique maximal end symbol.
        assert_eq!(c.symbols().len(), 15);
        assert_eq!(c.symbols()[6], 0);
        assert_eq!(c.symbols()[13], 0);
        assert_eq!(c.symbols()[14], c.base().sigma() + 1);
        assert_eq!(c.alpha_size(), 5);

        let bytes = c.to_marked_bytes();
        assert_eq!(bytes, b"banana\x01banana\x02");
        let back = SentinelConcat::from_marked_bytes(&bytes).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn concat_rejects_bad_inputs() {
        let base = load_text(b"banana", 0).unwrap();
        assert!(generate_concat(&base, 1).is_err());
        assert!(SentinelConcat::from_marked_bytes(b"ab\x01ab").is_err());
        assert!(SentinelConcat::from_marked_bytes(b"ab\x01ac\x02").is_err());
        assert!(SentinelConcat::from_marked_bytes(b"ab\x02").is_err());
    }
}
