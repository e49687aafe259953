//! Sampled LCP array: LCP values stored at a sparse set of suffix array
//! positions, with the remaining values recovered by short Psi walks.
//!
//! The sample set contains every strictly minimal text position (positions
//! `i` with `plcp[i] <= plcp[i+1]`, whose successor starts a fresh run of
//! values), plus optional extra samples breaking up long unsampled
//! stretches. Every unsampled position `i` satisfies
//! `plcp[i] = plcp[i+1] + 1` exactly, so walking `k` steps forward to the
//! nearest sample recovers `lcp[x] = lcp[psi^k(x)] + k`.

use crate::bitcodec::{
    BitVector, BitVectorBuilder, BitVectorKind, DeltaStream, DeltaStreamBuilder,
};
use crate::csa::Csa;
use crate::error::{Error, Result};
use crate::serialize::{
    open_container, seal_container, ByteReader, ByteWriter, STRUCT_MAGIC, STRUCT_TAG_SAMPLED_LCP,
};
use crate::suffixcore::{inverse_permutation, plcp_from_sa, suffix_array};
use crate::textstore::Indexable;
use serde::Serialize;

/// Spacing value meaning "no extra samples".
pub const NO_EXTRA_SAMPLES: u64 = u64::MAX;

/// LCP samples at marked suffix array positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledLcp {
    n: u64,
    d_prime: u64,
    minimal_samples: u64,
    extra_samples: u64,
    marks: BitVector,
    /// Sampled values shifted by one (the coder stores positive integers),
    /// in suffix array position order.
    values: DeltaStream,
}

impl SampledLcp {
    /// Assembles the structure from `(suffix array position, value)` samples.
    pub(crate) fn assemble(
        n: u64,
        d_prime: u64,
        minimal_samples: u64,
        extra_samples: u64,
        mut samples: Vec<(u64, u64)>,
        kind: BitVectorKind,
    ) -> SampledLcp {
        samples.sort_unstable_by_key(|&(x, _)| x);
        let mut marks = BitVectorBuilder::new(kind);
        let mut values = DeltaStreamBuilder::new();
        for &(x, value) in &samples {
            marks.push_one(x);
            values.push(value + 1);
        }
        debug_assert_eq!(samples.len() as u64, minimal_samples + extra_samples);
        SampledLcp {
            n,
            d_prime,
            minimal_samples,
            extra_samples,
            marks: marks.finish(n),
            values: values.finish(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Extra-sample spacing; [`NO_EXTRA_SAMPLES`] when none were requested.
    pub fn d_prime(&self) -> u64 {
        self.d_prime
    }

    pub fn minimal_samples(&self) -> u64 {
        self.minimal_samples
    }

    pub fn extra_samples(&self) -> u64 {
        self.extra_samples
    }

    pub fn sample_count(&self) -> u64 {
        self.minimal_samples + self.extra_samples
    }

    /// Encoding of the sample-position mark vector.
    pub fn marks_kind(&self) -> BitVectorKind {
        self.marks.kind()
    }

    pub fn is_sampled(&self, x: u64) -> bool {
        self.marks.get(x)
    }

    /// `lcp[x]`: the longest common prefix of the suffix at suffix array
    /// position `x` and its left match.
    pub fn access(&self, csa: &Csa, x: u64) -> u64 {
        self.access_with_steps(csa, x).0
    }

    /// [`access`](Self::access) plus the number of Psi steps walked; the
    /// walk length is always below the extra-sample spacing.
    pub fn access_with_steps(&self, csa: &Csa, x: u64) -> (u64, u64) {
        assert!(
            x >= 1 && x <= self.n,
            "position {x} out of range 1..={}",
            self.n
        );
        let mut x = x;
        let mut k = 0u64;
        while !self.marks.get(x) {
            x = csa.psi(x);
            k += 1;
        }
        let stored = self.values.get(self.marks.rank1(x) as usize) - 1;
        (stored + k, k)
    }

    /// Longest Psi walk over all suffix array positions, by exhaustive
    /// probing; strictly below `d_prime` by construction.
    pub fn max_walk_length(&self, csa: &Csa) -> u64 {
        (1..=self.n)
            .map(|x| self.access_with_steps(csa, x).1)
            .max()
            .unwrap_or(0)
    }

    /// Space accounting.
    pub fn size_report(&self) -> SampledLcpSizeReport {
        SampledLcpSizeReport {
            n: self.n,
            d_prime: self.d_prime,
            minimal_samples: self.minimal_samples,
            extra_samples: self.extra_samples,
            marks_bits: self.marks.size_in_bits(),
            values_bits: self.values.size_in_bits(),
            header_bits: HEADER_BITS,
        }
    }

    /// Serializes into a structure container bound to the index digest.
    pub fn to_bytes(&self, index_hash: &[u8; 32]) -> Vec<u8> {
        let mut w = ByteWriter::new();
        w.put_bytes(index_hash);
        w.put_u8(STRUCT_TAG_SAMPLED_LCP);
        w.put_u64(self.n);
        w.put_u64(self.d_prime);
        w.put_u64(self.minimal_samples);
        w.put_u64(self.extra_samples);
        self.marks.write(&mut w);
        self.values.write(&mut w);
        seal_container(STRUCT_MAGIC, &w.into_bytes()).0
    }

    /// Loads a structure file, refusing payloads written for another index.
    pub fn from_bytes(bytes: &[u8], index_hash: &[u8; 32]) -> Result<SampledLcp> {
        let (payload, _) = open_container(STRUCT_MAGIC, bytes)?;
        let mut r = ByteReader::new(payload);
        if r.get_bytes(32)? != &index_hash[..] {
            return Err(Error::IndexMismatch);
        }
        if r.get_u8()? != STRUCT_TAG_SAMPLED_LCP {
            return Err(Error::MalformedData("not a sampled LCP section".into()));
        }
        let n = r.get_u64()?;
        let d_prime = r.get_u64()?;
        let minimal_samples = r.get_u64()?;
        let extra_samples = r.get_u64()?;
        let marks = BitVector::read(&mut r)?;
        let values = DeltaStream::read(&mut r)?;
        if !r.is_at_end() {
            return Err(Error::MalformedData(
                "trailing bytes after structure payload".into(),
            ));
        }
        if marks.len() != n
            || marks.count_ones() != minimal_samples + extra_samples
            || values.len() as u64 != minimal_samples + extra_samples
        {
            return Err(Error::MalformedData("sampled LCP sections disagree".into()));
        }
        Ok(SampledLcp {
            n,
            d_prime,
            minimal_samples,
            extra_samples,
            marks,
            values,
        })
    }
}

const HEADER_BITS: u64 = 4 * 64 + 8;

/// Bit counts per component.
#[derive(Debug, Clone, Serialize)]
pub struct SampledLcpSizeReport {
    pub n: u64,
    pub d_prime: u64,
    pub minimal_samples: u64,
    pub extra_samples: u64,
    pub marks_bits: u64,
    pub values_bits: u64,
    pub header_bits: u64,
}

impl SampledLcpSizeReport {
    pub fn total_bits(&self) -> u64 {
        self.marks_bits + self.values_bits + self.header_bits
    }

    pub fn bits_per_symbol(&self) -> f64 {
        self.total_bits() as f64 / self.n as f64
    }
}

/// Converts the spacing exponent form `d' = n / R^(1-epsilon)` into a
/// concrete spacing, clamped to at least 1.
pub fn spacing_from_epsilon(n: u64, run_count: u64, epsilon: f64) -> u64 {
    assert!((0.0..=1.0).contains(&epsilon), "epsilon must lie in [0, 1]");
    assert!(run_count >= 1);
    let denom = (run_count as f64).powf(1.0 - epsilon);
    ((n as f64 / denom).floor() as u64).max(1)
}

/// Tracks runs of unsampled text positions and requests an extra sample
/// whenever `d_prime` consecutive positions went unsampled.
pub(crate) struct SpacingCounter {
    d_prime: u64,
    run: u64,
}

impl SpacingCounter {
    pub(crate) fn new(d_prime: u64) -> Self {
        SpacingCounter { d_prime, run: 0 }
    }

    /// Observes one text position in order; returns true when this position
    /// must become an extra sample.
    pub(crate) fn observe(&mut self, sampled: bool) -> bool {
        if sampled {
            self.run = 0;
            return false;
        }
        self.run += 1;
        if self.run == self.d_prime {
            self.run = 0;
            return true;
        }
        false
    }
}

/// Validates a spacing parameter: `None` means no extra samples.
pub(crate) fn spacing_value(d_prime: Option<u64>) -> Result<u64> {
    match d_prime {
        Some(0) => Err(Error::InvalidParameter(
            "extra-sample spacing must be at least 1".into(),
        )),
        Some(v) => Ok(v),
        None => Ok(NO_EXTRA_SAMPLES),
    }
}

/// Builds the sampled LCP array from plain suffix arrays, bypassing the
/// index. Produces bit-identical output to the index-driven construction;
/// intended for large-scale experiments where quadratic-free build speed
/// matters more than working space.
pub fn build_sampled_lcp_fast(
    text: &impl Indexable,
    d_prime: Option<u64>,
    kind: BitVectorKind,
) -> Result<SampledLcp> {
    let d_prime = spacing_value(d_prime)?;
    if text.is_empty() {
        return Err(Error::EmptyInput);
    }
    let symbols = text.symbols();
    let n = symbols.len();
    let sa = suffix_array(symbols);
    let isa = inverse_permutation(&sa);
    let plcp = plcp_from_sa(symbols, &sa, &isa);

    let maximal = |i: usize| -> bool {
        let x = isa[i - 1];
        if x == 1 || i == 1 {
            return true;
        }
        let j = sa[x as usize - 2] as usize;
        j == 1 || symbols[i - 2] != symbols[j - 2]
    };
    let strictly_minimal =
        |i: usize| -> bool { i == n || (maximal(i + 1) && plcp[i - 1] <= plcp[i]) };

    let mut samples: Vec<(u64, u64)> = Vec::new();
    let mut minimal_count = 0u64;
    for i in 1..=n {
        if strictly_minimal(i) {
            samples.push((isa[i - 1] as u64, plcp[i - 1] as u64));
            minimal_count += 1;
        }
    }
    let mut extras = 0u64;
    if d_prime != NO_EXTRA_SAMPLES {
        let mut counter = SpacingCounter::new(d_prime);
        for i in 1..=n {
            if counter.observe(strictly_minimal(i)) {
                samples.push((isa[i - 1] as u64, plcp[i - 1] as u64));
                extras += 1;
            }
        }
    }
    Ok(SampledLcp::assemble(
        n as u64,
        d_prime,
        minimal_count,
        extras,
        samples,
        kind,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csa::build_csa;
    use crate::oracle::naive_reference;
    use crate::textstore::{generate_concat, generate_random, load_text};

    fn banana() -> crate::textstore::Text {
        load_text(b"banana", 0x00).unwrap()
    }

    #[test]
    fn banana_sample_set_and_access() {
        let text = banana();
        let csa = build_csa(&text, 2).unwrap();
        let slcp = build_sampled_lcp_fast(&text, None, BitVectorKind::Gap).unwrap();
        assert_eq!(slcp.minimal_samples(), 4);
        assert_eq!(slcp.extra_samples(), 0);
        for x in [1u64, 2, 5, 6] {
            assert!(slcp.is_sampled(x), "position {x} should carry a sample");
            assert_eq!(slcp.access(&csa, x), 0);
        }
        let (v, k) = slcp.access_with_steps(&csa, 3);
        assert_eq!((v, k), (1, 1));
        let (v, k) = slcp.access_with_steps(&csa, 5);
        assert_eq!((v, k), (0, 0));

        let arrays = naive_reference(&text).unwrap();
        for x in 1..=7u64 {
            assert_eq!(slcp.access(&csa, x), arrays.lcp[x as usize - 1] as u64);
        }
        assert_eq!(slcp.max_walk_length(&csa), 3);
    }

    #[test]
    fn unary_text_samples() {
        let text = load_text(b"aaaa", 0x00).unwrap();
        let csa = build_csa(&text, 2).unwrap();
        let slcp = build_sampled_lcp_fast(&text, None, BitVectorKind::Gap).unwrap();
        let arrays = naive_reference(&text).unwrap();
        for x in 1..=text.len() as u64 {
            assert_eq!(slcp.access(&csa, x), arrays.lcp[x as usize - 1] as u64);
        }
        assert!(slcp.minimal_samples() <= arrays.bwt_run_count() as u64);
    }

    #[test]
    fn spacing_one_samples_everything() {
        let text = generate_random(4, 300, 21).unwrap();
        let csa = build_csa(&text, 4).unwrap();
        let slcp = build_sampled_lcp_fast(&text, Some(1), BitVectorKind::Gap).unwrap();
        assert_eq!(slcp.sample_count(), text.len() as u64);
        for x in 1..=text.len() as u64 {
            let (_, k) = slcp.access_with_steps(&csa, x);
            assert_eq!(k, 0);
        }
        assert_eq!(slcp.max_walk_length(&csa), 0);
    }

    #[test]
    fn walk_bound_and_values_on_random_and_repetitive_texts() {
        let texts = vec![
            generate_random(2, 1200, 31).unwrap(),
            generate_random(26, 1200, 32).unwrap(),
        ];
        for text in &texts {
            let csa = build_csa(text, 4).unwrap();
            let arrays = naive_reference(text).unwrap();
            for d_prime in [Some(4u64), Some(16), None] {
                let slcp = build_sampled_lcp_fast(text, d_prime, BitVectorKind::Gap).unwrap();
                for x in 1..=text.len() as u64 {
                    let (v, k) = slcp.access_with_steps(&csa, x);
                    assert_eq!(v, arrays.lcp[x as usize - 1] as u64);
                    if let Some(dp) = d_prime {
                        assert!(k < dp, "walk {k} reached spacing {dp}");
                    }
                }
            }
        }

        let base = generate_random(4, 400, 33).unwrap();
        let concat = generate_concat(&base, 4).unwrap();
        let csa = build_csa(&concat, 4).unwrap();
        let arrays = naive_reference(&concat).unwrap();
        let slcp = build_sampled_lcp_fast(&concat, Some(64), BitVectorKind::Gap).unwrap();
        for x in 1..=concat.len() as u64 {
            assert_eq!(slcp.access(&csa, x), arrays.lcp[x as usize - 1] as u64);
        }
        assert!(slcp.max_walk_length(&csa) < 64);
    }

    #[test]
    fn rejects_zero_spacing() {
        let text = banana();
        assert!(matches!(
            build_sampled_lcp_fast(&text, Some(0), BitVectorKind::Gap),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn epsilon_conversion() {
        // epsilon = 1 gives spacing n; epsilon = 0 gives n / R.
        assert_eq!(spacing_from_epsilon(1000, 10, 1.0), 1000);
        assert_eq!(spacing_from_epsilon(1000, 10, 0.0), 100);
        assert_eq!(spacing_from_epsilon(100, 100, 0.0), 1);
        assert_eq!(spacing_from_epsilon(1 << 20, 1 << 10, 0.5), 1 << 15);
    }

    #[test]
    fn size_report_accounts_every_section() {
        let text = generate_random(4, 2000, 34).unwrap();
        let slcp = build_sampled_lcp_fast(&text, Some(16), BitVectorKind::Gap).unwrap();
        let report = slcp.size_report();
        assert_eq!(
            report.total_bits(),
            report.marks_bits + report.values_bits + report.header_bits
        );
        assert!(report.bits_per_symbol() > 0.0);
        assert_eq!(report.minimal_samples, slcp.minimal_samples());
        assert_eq!(report.extra_samples, slcp.extra_samples());
    }

    #[test]
    fn serialization_round_trips_and_checks_index_binding() {
        let text = generate_random(4, 500, 35).unwrap();
        let csa = build_csa(&text, 4).unwrap();
        let hash = csa.content_hash();
        let slcp = build_sampled_lcp_fast(&text, Some(8), BitVectorKind::Gap).unwrap();
        let bytes = slcp.to_bytes(&hash);
        let back = SampledLcp::from_bytes(&bytes, &hash).unwrap();
        assert_eq!(back, slcp);

        let other = build_csa(&text, 8).unwrap().content_hash();
        assert!(matches!(
            SampledLcp::from_bytes(&bytes, &other),
            Err(Error::IndexMismatch)
        ));
    }

    #[test]
    fn golden_file_layout_is_bit_exact() {
        let text = banana();
        let csa = build_csa(&text, 2).unwrap();
        let slcp = build_sampled_lcp_fast(&text, None, BitVectorKind::Gap).unwrap();
        let bytes = slcp.to_bytes(&csa.content_hash());
        let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
        let expected = concat!(
            "534c43530100e2000000000000000846947e62df6afc944fd117ed83d477b0d5d5ee40f138ee9b1c803ce51f2fa70107",
            "00000000000000ffffffffffffffff040000000000000000000000000000000107000000000000000400000000000000",
            "070000000000000006000000000000002000000001000000000000006b00000000000000010000000000000000000000",
            "000000000100000000000000000000000000000004000000000000000400000000000000040000000000000020000000",
            "01000000000000000f000000000000000100000000000000000000000000000001000000000000000000000000000000",
            "43adda205cef96156cfa1a8531f5f348af2b9f61aad65575a4b6b0739a492425",
        );
        assert_eq!(hex, expected);
        let back = SampledLcp::from_bytes(&bytes, &csa.content_hash()).unwrap();
        assert_eq!(back, slcp);
    }

    #[test]
    fn plain_marks_variant_matches_gap_variant() {
        let text = generate_random(4, 800, 36).unwrap();
        let csa = build_csa(&text, 4).unwrap();
        let gap = build_sampled_lcp_fast(&text, Some(8), BitVectorKind::Gap).unwrap();
        let plain = build_sampled_lcp_fast(&text, Some(8), BitVectorKind::Plain).unwrap();
        for x in 1..=text.len() as u64 {
            assert_eq!(gap.access(&csa, x), plain.access(&csa, x));
        }
    }
}
