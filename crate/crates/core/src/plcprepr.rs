//! Representations of the permuted LCP array, each answering `plcp[i]` by
//! text position, plus LCP access by suffix array position through `locate`.
//!
//! Two families are provided. The encoded family stores the strictly
//! increasing values `plcp[i] + 2i` as ones in a bit vector of length `2n`
//! (plain or run-length encoded), answering by `select1`. The sampled family
//! keeps every q-th value as a fixed-width integer and resolves in-between
//! positions by bounded symbol comparison against the left match.

use crate::bitcodec::{BitVector, BitVectorBuilder, BitVectorKind, IntVector, IntVectorBuilder};
use crate::csa::Csa;
use crate::error::{Error, Result};
use crate::lcpbuild::{build_plcp_from_csa, PlcpSink};
use crate::serialize::{
    open_container, seal_container, ByteReader, ByteWriter, STRUCT_MAGIC, STRUCT_TAG_PLCP,
};

const VARIANT_ENCODED: u8 = 0;
const VARIANT_SAMPLED: u8 = 1;

/// Symbols fetched per `display` call while comparing suffixes; one call
/// pays the sample-walk startup once per chunk rather than per symbol.
const COMPARE_CHUNK: u64 = 16;

/// The permuted LCP array as ones at `plcp[i] + 2i` in a `2n`-bit vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryPlcp {
    n: u64,
    bits: BitVector,
}

impl UnaryPlcp {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn kind(&self) -> BitVectorKind {
        self.bits.kind()
    }

    /// `plcp[i]`, by one `select1`.
    pub fn access(&self, i: u64) -> u64 {
        assert!(
            i >= 1 && i <= self.n,
            "position {i} out of range 1..={}",
            self.n
        );
        self.bits.select1(i) - 2 * i
    }

    pub fn size_in_bits(&self) -> u64 {
        self.bits.size_in_bits() + 64
    }

    fn write(&self, w: &mut ByteWriter) {
        w.put_u64(self.n);
        self.bits.write(w);
    }

    fn read(r: &mut ByteReader<'_>) -> Result<UnaryPlcp> {
        let n = r.get_u64()?;
        let bits = BitVector::read(r)?;
        if bits.len() != 2 * n || bits.count_ones() != n {
            return Err(Error::MalformedData(
                "encoded PLCP sections disagree".into(),
            ));
        }
        Ok(UnaryPlcp { n, bits })
    }
}

/// Streaming builder; also usable as the sink of the index-driven scan.
pub struct UnaryPlcpBuilder {
    bits: BitVectorBuilder,
    prev: u64,
    count: u64,
}

impl UnaryPlcpBuilder {
    pub fn new(kind: BitVectorKind) -> Self {
        UnaryPlcpBuilder {
            bits: BitVectorBuilder::new(kind),
            prev: 0,
            count: 0,
        }
    }

    pub fn finish(self) -> UnaryPlcp {
        UnaryPlcp {
            n: self.count,
            bits: self.bits.finish(2 * self.count),
        }
    }
}

impl PlcpSink for UnaryPlcpBuilder {
    fn emit(&mut self, i: u64, value: u64) {
        assert_eq!(i, self.count + 1, "positions must arrive in order");
        assert!(
            i == 1 || value + 1 >= self.prev,
            "consecutive values may drop by at most one ({} -> {value} at {i})",
            self.prev
        );
        self.bits.push_one(value + 2 * i);
        self.prev = value;
        self.count = i;
    }
}

/// Builds the encoded representation from an explicit value stream.
pub fn build_unary_plcp(values: impl IntoIterator<Item = u64>, kind: BitVectorKind) -> UnaryPlcp {
    let mut b = UnaryPlcpBuilder::new(kind);
    for (idx, value) in values.into_iter().enumerate() {
        b.emit(idx as u64 + 1, value);
    }
    b.finish()
}

/// Builds the encoded representation straight from the index.
pub fn build_unary_plcp_from_csa(csa: &Csa, kind: BitVectorKind) -> UnaryPlcp {
    let mut b = UnaryPlcpBuilder::new(kind);
    build_plcp_from_csa(csa, &mut b);
    b.finish()
}

/// Every q-th permuted LCP value, fixed width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledPlcpText {
    n: u64,
    q: u64,
    values: IntVector,
}

impl SampledPlcpText {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn sample_count(&self) -> u64 {
        self.values.len() as u64
    }

    /// The stored value for sample index `a` (text position `1 + a*q`).
    pub fn stored(&self, a: u64) -> u64 {
        self.values.get(a as usize + 1)
    }

    /// `plcp[i]`.
    pub fn access(&self, csa: &Csa, i: u64) -> u64 {
        self.access_with_comparisons(csa, i).0
    }

    /// [`access`](Self::access) plus the number of symbol pairs inspected.
    ///
    /// Position `i` between samples `p = 1 + a*q` and `p' = p + q` is pinned
    /// to `[max(plcp[p] - (i-p), 0), plcp[p'] + (p'-i)]`; the suffix at `i`
    /// and its left match are then compared from the lower bound until
    /// mismatch or until the upper bound proves equality. The inspection
    /// count never exceeds `q + plcp[p'] - plcp[p]`.
    pub fn access_with_comparisons(&self, csa: &Csa, i: u64) -> (u64, u64) {
        let n = self.n;
        assert!(i >= 1 && i <= n, "position {i} out of range 1..={n}");
        let a = (i - 1) / self.q;
        let b = (i - 1) % self.q;
        let stored = self.stored(a);
        if b == 0 {
            return (stored, 0);
        }
        let lo = stored.saturating_sub(b);
        let hi = if a + 1 < self.sample_count() {
            let next_pos = 1 + (a + 1) * self.q;
            self.stored(a + 1) + (next_pos - i)
        } else {
            n - i + 1
        };
        if lo >= hi {
            return (hi, 0);
        }
        let x = csa.sa_inverse(i);
        if x == 1 {
            return (0, 0);
        }
        let j = csa.locate(x - 1);

        let mut cur = lo;
        let mut comparisons = 0u64;
        while cur < hi {
            let left_i = n - (i + cur) + 1;
            let left_j = n.saturating_sub(j + cur - 1);
            let chunk = COMPARE_CHUNK.min(hi - cur).min(left_i).min(left_j);
            if chunk == 0 {
                return (cur, comparisons);
            }
            let va = csa.display(i + cur, chunk);
            let vb = csa.display(j + cur, chunk);
            for t in 0..chunk as usize {
                comparisons += 1;
                if va[t] != vb[t] {
                    return (cur + t as u64, comparisons);
                }
            }
            cur += chunk;
        }
        (hi, comparisons)
    }

    pub fn size_in_bits(&self) -> u64 {
        self.values.size_in_bits() + 128
    }

    fn write(&self, w: &mut ByteWriter) {
        w.put_u64(self.n);
        w.put_u64(self.q);
        self.values.write(w);
    }

    fn read(r: &mut ByteReader<'_>) -> Result<SampledPlcpText> {
        let n = r.get_u64()?;
        let q = r.get_u64()?;
        let values = IntVector::read(r)?;
        if q == 0 || (n > 0 && values.len() as u64 != 1 + (n - 1) / q) {
            return Err(Error::MalformedData(
                "sampled PLCP sections disagree".into(),
            ));
        }
        Ok(SampledPlcpText { n, q, values })
    }
}

/// Streaming builder keeping positions `1, q+1, 2q+1, ...`.
pub struct SampledTextBuilder {
    q: u64,
    count: u64,
    values: Vec<u64>,
}

impl SampledTextBuilder {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter(
                "sample rate q must be at least 1".into(),
            ));
        }
        Ok(SampledTextBuilder {
            q,
            count: 0,
            values: Vec::new(),
        })
    }

    pub fn finish(self) -> SampledPlcpText {
        let n = self.count;
        let width = 64 - n.saturating_sub(1).leading_zeros().min(63);
        let mut packed = IntVectorBuilder::with_width(width.max(1));
        for &v in &self.values {
            packed.push(v);
        }
        SampledPlcpText {
            n,
            q: self.q,
            values: packed.finish(),
        }
    }
}

impl PlcpSink for SampledTextBuilder {
    fn emit(&mut self, i: u64, value: u64) {
        assert_eq!(i, self.count + 1, "positions must arrive in order");
        if (i - 1).is_multiple_of(self.q) {
            self.values.push(value);
        }
        self.count = i;
    }
}

/// Builds the sampled representation from an explicit value stream.
pub fn build_sampled_plcp_text(
    values: impl IntoIterator<Item = u64>,
    q: u64,
) -> Result<SampledPlcpText> {
    let mut b = SampledTextBuilder::new(q)?;
    for (idx, value) in values.into_iter().enumerate() {
        b.emit(idx as u64 + 1, value);
    }
    Ok(b.finish())
}

/// Builds the sampled representation straight from the index.
pub fn build_sampled_plcp_text_from_csa(csa: &Csa, q: u64) -> Result<SampledPlcpText> {
    let mut b = SampledTextBuilder::new(q)?;
    build_plcp_from_csa(csa, &mut b);
    Ok(b.finish())
}

/// Any of the permuted-LCP representations behind one access interface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlcpRepr {
    Encoded(UnaryPlcp),
    Sampled(SampledPlcpText),
}

impl PlcpRepr {
    pub fn n(&self) -> u64 {
        match self {
            PlcpRepr::Encoded(v) => v.n(),
            PlcpRepr::Sampled(v) => v.n(),
        }
    }

    /// Stable name for reports and the CLI.
    pub fn kind_name(&self) -> &'static str {
        match self {
            PlcpRepr::Encoded(v) => match v.kind() {
                BitVectorKind::Rle => "plcp-rle",
                _ => "plcp-plain",
            },
            PlcpRepr::Sampled(_) => "plcp-sampled",
        }
    }

    /// `plcp[i]`; the index is consulted only by the sampled variant.
    pub fn access(&self, csa: &Csa, i: u64) -> u64 {
        self.access_with_comparisons(csa, i).0
    }

    pub fn access_with_comparisons(&self, csa: &Csa, i: u64) -> (u64, u64) {
        match self {
            PlcpRepr::Encoded(v) => (v.access(i), 0),
            PlcpRepr::Sampled(v) => v.access_with_comparisons(csa, i),
        }
    }

    pub fn size_in_bits(&self) -> u64 {
        match self {
            PlcpRepr::Encoded(v) => v.size_in_bits(),
            PlcpRepr::Sampled(v) => v.size_in_bits(),
        }
    }

    /// Serializes into a structure container bound to the index digest.
    pub fn to_bytes(&self, index_hash: &[u8; 32]) -> Vec<u8> {
        let mut w = ByteWriter::new();
        w.put_bytes(index_hash);
        w.put_u8(STRUCT_TAG_PLCP);
        match self {
            PlcpRepr::Encoded(v) => {
                w.put_u8(VARIANT_ENCODED);
                v.write(&mut w);
            }
            PlcpRepr::Sampled(v) => {
                w.put_u8(VARIANT_SAMPLED);
                v.write(&mut w);
            }
        }
        seal_container(STRUCT_MAGIC, &w.into_bytes()).0
    }

    /// Loads a structure file, refusing payloads written for another index.
    pub fn from_bytes(bytes: &[u8], index_hash: &[u8; 32]) -> Result<PlcpRepr> {
        let (payload, _) = open_container(STRUCT_MAGIC, bytes)?;
        let mut r = ByteReader::new(payload);
        if r.get_bytes(32)? != &index_hash[..] {
            return Err(Error::IndexMismatch);
        }
        if r.get_u8()? != STRUCT_TAG_PLCP {
            return Err(Error::MalformedData("not a PLCP section".into()));
        }
        let variant = r.get_u8()?;
        let out = match variant {
            VARIANT_ENCODED => PlcpRepr::Encoded(UnaryPlcp::read(&mut r)?),
            VARIANT_SAMPLED => PlcpRepr::Sampled(SampledPlcpText::read(&mut r)?),
            other => {
                return Err(Error::MalformedData(format!(
                    "unknown PLCP variant tag {other}"
                )))
            }
        };
        if !r.is_at_end() {
            return Err(Error::MalformedData(
                "trailing bytes after structure payload".into(),
            ));
        }
        Ok(out)
    }
}

/// `lcp[x]` through a permuted-LCP representation: one `locate` plus one
/// representation access.
pub fn lcp_via_plcp(csa: &Csa, repr: &PlcpRepr, x: u64) -> u64 {
    repr.access(csa, csa.locate(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csa::build_csa;
    use crate::oracle::naive_reference;
    use crate::textstore::{generate_concat, generate_random, load_text, Indexable, Text};

    fn banana() -> Text {
        load_text(b"banana", 0x00).unwrap()
    }

    fn oracle_plcp(text: &impl Indexable) -> Vec<u64> {
        naive_reference(text)
            .unwrap()
            .plcp
            .iter()
            .map(|&v| v as u64)
            .collect()
    }

    #[test]
    fn encoded_one_positions() {
        let banana_bits = build_unary_plcp(vec![0, 3, 2, 1, 0, 0, 0], BitVectorKind::Plain);
        let ones: Vec<u64> = (1..=14).filter(|&p| banana_bits.bits.get(p)).collect();
        assert_eq!(ones, vec![2, 7, 8, 9, 10, 12, 14]);
        assert_eq!(banana_bits.access(3), 2);
        assert_eq!(banana_bits.access(2), 3);
        assert_eq!(banana_bits.access(1), 0);

        let unary_bits = build_unary_plcp(vec![3, 2, 1, 0, 0], BitVectorKind::Plain);
        let ones: Vec<u64> = (1..=10).filter(|&p| unary_bits.bits.get(p)).collect();
        assert_eq!(ones, vec![5, 6, 7, 8, 10]);

        let single = build_unary_plcp(vec![0], BitVectorKind::Plain);
        assert_eq!(single.bits.len(), 2);
        assert!(single.bits.get(2) && !single.bits.get(1));
    }

    #[test]
    #[should_panic(expected = "drop by at most one")]
    fn encoded_build_rejects_steep_drops() {
        build_unary_plcp(vec![0, 5, 1], BitVectorKind::Plain);
    }

    #[test]
    fn every_representation_matches_the_oracle() {
        let texts = vec![
            banana(),
            generate_random(2, 800, 61).unwrap(),
            generate_random(26, 800, 62).unwrap(),
        ];
        for text in &texts {
            let csa = build_csa(text, 4).unwrap();
            let plcp = oracle_plcp(text);
            let n = text.len() as u64;
            let reprs = vec![
                PlcpRepr::Encoded(build_unary_plcp_from_csa(&csa, BitVectorKind::Plain)),
                PlcpRepr::Encoded(build_unary_plcp_from_csa(&csa, BitVectorKind::Rle)),
                PlcpRepr::Sampled(build_sampled_plcp_text_from_csa(&csa, 1).unwrap()),
                PlcpRepr::Sampled(build_sampled_plcp_text_from_csa(&csa, 2).unwrap()),
                PlcpRepr::Sampled(build_sampled_plcp_text_from_csa(&csa, 16).unwrap()),
                PlcpRepr::Sampled(build_sampled_plcp_text_from_csa(&csa, n).unwrap()),
            ];
            for repr in &reprs {
                for i in 1..=n {
                    assert_eq!(
                        repr.access(&csa, i),
                        plcp[i as usize - 1],
                        "kind {} at position {i}",
                        repr.kind_name()
                    );
                }
            }
        }
    }

    #[test]
    fn index_stream_equals_oracle_stream() {
        let text = generate_random(4, 600, 63).unwrap();
        let csa = build_csa(&text, 4).unwrap();
        let from_index = build_unary_plcp_from_csa(&csa, BitVectorKind::Plain);
        let from_oracle = build_unary_plcp(oracle_plcp(&text), BitVectorKind::Plain);
        assert_eq!(from_index, from_oracle);
    }

    #[test]
    fn sampled_banana_between_samples() {
        let text = banana();
        let csa = build_csa(&text, 2).unwrap();
        let repr = build_sampled_plcp_text_from_csa(&csa, 2).unwrap();
        assert_eq!(repr.sample_count(), 4);
        assert_eq!(
            (
                repr.stored(0),
                repr.stored(1),
                repr.stored(2),
                repr.stored(3)
            ),
            (0, 2, 0, 0)
        );
        // Position 4 is pinned between the samples at 3 and 5; the bounds
        // meet, so no symbols are inspected.
        let (v, comparisons) = repr.access_with_comparisons(&csa, 4);
        assert_eq!((v, comparisons), (1, 0));

        let whole = build_sampled_plcp_text_from_csa(&csa, 7).unwrap();
        assert_eq!(whole.sample_count(), 1);
        let plcp = oracle_plcp(&text);
        for i in 1..=7u64 {
            assert_eq!(whole.access(&csa, i), plcp[i as usize - 1]);
        }
    }

    #[test]
    fn sampled_comparison_counts_respect_the_bound() {
        let text = generate_random(4, 10_000, 64).unwrap();
        let csa = build_csa(&text, 8).unwrap();
        let q = 16u64;
        let repr = build_sampled_plcp_text_from_csa(&csa, q).unwrap();
        let plcp = oracle_plcp(&text);
        let n = text.len() as u64;
        let mut total = 0u64;
        for i in 1..=n {
            let (v, comparisons) = repr.access_with_comparisons(&csa, i);
            assert_eq!(v, plcp[i as usize - 1]);
            total += comparisons;
            let a = (i - 1) / q;
            if a + 1 < repr.sample_count() {
                let budget = q + repr.stored(a + 1) - repr.stored(a);
                assert!(
                    comparisons <= budget,
                    "position {i}: {comparisons} inspections, budget {budget}"
                );
            }
        }
        let mean = total as f64 / n as f64;
        assert!(
            mean <= 2.0 * q as f64,
            "mean inspections {mean} too far above q={q}"
        );
    }

    #[test]
    fn rle_encoding_wins_on_repetitive_text() {
        let base = generate_random(4, 500, 65).unwrap();
        let concat = generate_concat(&base, 6).unwrap();
        let csa = build_csa(&concat, 4).unwrap();
        let plain = build_unary_plcp_from_csa(&csa, BitVectorKind::Plain);
        let rle = build_unary_plcp_from_csa(&csa, BitVectorKind::Rle);
        let plcp = oracle_plcp(&concat);
        for i in 1..=concat.len() as u64 {
            assert_eq!(plain.access(i), plcp[i as usize - 1]);
            assert_eq!(rle.access(i), plcp[i as usize - 1]);
        }
        assert!(
            rle.size_in_bits() <= plain.size_in_bits(),
            "rle {} bits vs plain {} bits",
            rle.size_in_bits(),
            plain.size_in_bits()
        );
    }

    #[test]
    fn lcp_by_suffix_array_position() {
        let text = banana();
        let csa = build_csa(&text, 2).unwrap();
        let repr = PlcpRepr::Encoded(build_unary_plcp_from_csa(&csa, BitVectorKind::Plain));
        assert_eq!(lcp_via_plcp(&csa, &repr, 4), 3);
        assert_eq!(lcp_via_plcp(&csa, &repr, 1), 0);

        let text = generate_random(4, 700, 66).unwrap();
        let csa = build_csa(&text, 4).unwrap();
        let arrays = naive_reference(&text).unwrap();
        for repr in [
            PlcpRepr::Encoded(build_unary_plcp_from_csa(&csa, BitVectorKind::Rle)),
            PlcpRepr::Sampled(build_sampled_plcp_text_from_csa(&csa, 8).unwrap()),
        ] {
            for x in 1..=text.len() as u64 {
                assert_eq!(
                    lcp_via_plcp(&csa, &repr, x),
                    arrays.lcp[x as usize - 1] as u64
                );
            }
        }
    }

    #[test]
    fn serialization_round_trips_and_checks_index_binding() {
        let text = generate_random(4, 400, 67).unwrap();
        let csa = build_csa(&text, 4).unwrap();
        let hash = csa.content_hash();
        for repr in [
            PlcpRepr::Encoded(build_unary_plcp_from_csa(&csa, BitVectorKind::Plain)),
            PlcpRepr::Encoded(build_unary_plcp_from_csa(&csa, BitVectorKind::Rle)),
            PlcpRepr::Sampled(build_sampled_plcp_text_from_csa(&csa, 4).unwrap()),
        ] {
            let bytes = repr.to_bytes(&hash);
            let back = PlcpRepr::from_bytes(&bytes, &hash).unwrap();
            assert_eq!(back, repr);
            let other = build_csa(&text, 8).unwrap().content_hash();
            assert!(matches!(
                PlcpRepr::from_bytes(&bytes, &other),
                Err(Error::IndexMismatch)
            ));
        }
    }

    #[test]
    fn rejects_zero_sample_rate() {
        let text = banana();
        let csa = build_csa(&text, 2).unwrap();
        assert!(matches!(
            build_sampled_plcp_text_from_csa(&csa, 0),
            Err(Error::InvalidParameter(_))
        ));
    }
}
