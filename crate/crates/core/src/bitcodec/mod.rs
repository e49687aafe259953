//! Succinct bit-level building blocks: bit buffers, Elias-delta coding,
//! rank/select bit vectors in three encodings, and fixed-width integer
//! vectors.
//!
//! Bit order is pinned: bit `t` of a stream lives in word `t / 64` at bit
//! `t % 64` (least significant bit first within each word). Multi-bit fields
//! inside a codeword are appended most significant bit first. Bit vector
//! positions are 1-based: `rank1(pos)` counts ones in positions `1..=pos`,
//! `select1(k)` returns the position of the k-th one.

mod delta;
mod gap;
mod intvec;
mod plain;
mod rle;

pub use delta::{DeltaStream, DeltaStreamBuilder};
pub use gap::{GapBitVector, GapBuilder};
pub use intvec::{IntVector, IntVectorBuilder};
pub use plain::{PlainBitVector, PlainBuilder};
pub use rle::{RleBitVector, RleBuilder};

use crate::error::{Error, Result};
use crate::serialize::{ByteReader, ByteWriter};

/// Default directory block: one directory entry per this many values/runs.
pub const DEFAULT_BLOCK: usize = 32;

/// Append-only bit buffer, LSB-first within 64-bit words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitBuf {
    words: Vec<u64>,
    len: u64,
}

impl BitBuf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push_bit(&mut self, bit: bool) {
        let word = (self.len / 64) as usize;
        if word == self.words.len() {
            self.words.push(0);
        }
        if bit {
            self.words[word] |= 1u64 << (self.len % 64);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_bits_msb(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        for i in (0..width).rev() {
            self.push_bit((value >> i) & 1 == 1);
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn into_words(self) -> Vec<u64> {
        self.words
    }
}

/// Sequential bit reader over an LSB-first word slice.
#[derive(Debug, Clone)]
pub struct BitCursor<'a> {
    words: &'a [u64],
    pos: u64,
}

impl<'a> BitCursor<'a> {
    pub fn at(words: &'a [u64], pos: u64) -> Self {
        BitCursor { words, pos }
    }

    pub fn pos(&self) -> u64 {
        self.pos
    }

    #[inline]
    pub fn read_bit(&mut self) -> bool {
        let bit = (self.words[(self.pos / 64) as usize] >> (self.pos % 64)) & 1 == 1;
        self.pos += 1;
        bit
    }

    /// Reads `width` bits written most significant first.
    #[inline]
    pub fn read_bits_msb(&mut self, width: u32) -> u64 {
        let mut v = 0u64;
        for _ in 0..width {
            v = (v << 1) | self.read_bit() as u64;
        }
        v
    }
}

/// Appends the Elias-delta codeword of `v` (requires `v >= 1`).
///
/// The codeword spends `floor(log2 v) + 2 floor(log2(floor(log2 v) + 1)) + 1`
/// bits: a gamma-coded bit length followed by the value without its leading
/// one bit.
#[inline]
pub fn delta_encode(buf: &mut BitBuf, v: u64) {
    assert!(v >= 1, "Elias-delta is defined for values >= 1");
    let l = 64 - v.leading_zeros(); // bit length of v
    let m = 31 - l.leading_zeros(); // floor(log2 l), l >= 1
    for _ in 0..m {
        buf.push_bit(false);
    }
    buf.push_bits_msb(l as u64, m + 1);
    buf.push_bits_msb(v & !(1u64 << (l - 1)), l - 1);
}

/// Decodes one Elias-delta codeword.
#[inline]
pub fn delta_decode(cur: &mut BitCursor<'_>) -> u64 {
    let mut zeros = 0u32;
    while !cur.read_bit() {
        zeros += 1;
    }
    let l = (1u64 << zeros) | cur.read_bits_msb(zeros);
    if l == 1 {
        1
    } else {
        (1u64 << (l - 1)) | cur.read_bits_msb(l as u32 - 1)
    }
}

/// Number of bits the Elias-delta codeword of `v` occupies.
pub fn delta_code_len(v: u64) -> u64 {
    assert!(v >= 1);
    let l = (64 - v.leading_zeros()) as u64;
    let m = (31 - (l as u32).leading_zeros()) as u64;
    (l - 1) + 2 * m + 1
}

/// Encoding selector for the rank/select vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitVectorKind {
    Plain,
    Gap,
    Rle,
}

impl BitVectorKind {
    pub fn tag(self) -> u8 {
        match self {
            BitVectorKind::Plain => 0,
            BitVectorKind::Gap => 1,
            BitVectorKind::Rle => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(BitVectorKind::Plain),
            1 => Ok(BitVectorKind::Gap),
            2 => Ok(BitVectorKind::Rle),
            other => Err(Error::MalformedData(format!(
                "unknown bit vector kind tag {other}"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BitVectorKind::Plain => "plain",
            BitVectorKind::Gap => "gap",
            BitVectorKind::Rle => "rle",
        }
    }
}

impl std::str::FromStr for BitVectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(BitVectorKind::Plain),
            "gap" => Ok(BitVectorKind::Gap),
            "rle" => Ok(BitVectorKind::Rle),
            other => Err(Error::InvalidParameter(format!(
                "unknown bit vector kind '{other}'"
            ))),
        }
    }
}

/// A rank/select bit vector in one of the three encodings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BitVector {
    Plain(PlainBitVector),
    Gap(GapBitVector),
    Rle(RleBitVector),
}

macro_rules! dispatch {
    ($self:ident, $v:ident => $e:expr) => {
        match $self {
            BitVector::Plain($v) => $e,
            BitVector::Gap($v) => $e,
            BitVector::Rle($v) => $e,
        }
    };
}

impl BitVector {
    pub fn kind(&self) -> BitVectorKind {
        match self {
            BitVector::Plain(_) => BitVectorKind::Plain,
            BitVector::Gap(_) => BitVectorKind::Gap,
            BitVector::Rle(_) => BitVectorKind::Rle,
        }
    }

    pub fn len(&self) -> u64 {
        dispatch!(self, v => v.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn count_ones(&self) -> u64 {
        dispatch!(self, v => v.count_ones())
    }

    pub fn get(&self, pos: u64) -> bool {
        dispatch!(self, v => v.get(pos))
    }

    pub fn rank1(&self, pos: u64) -> u64 {
        dispatch!(self, v => v.rank1(pos))
    }

    pub fn rank0(&self, pos: u64) -> u64 {
        pos - self.rank1(pos)
    }

    pub fn select1(&self, k: u64) -> u64 {
        dispatch!(self, v => v.select1(k))
    }

    pub fn select0(&self, k: u64) -> u64 {
        dispatch!(self, v => v.select0(k))
    }

    pub fn size_in_bits(&self) -> u64 {
        dispatch!(self, v => v.size_in_bits())
    }

    pub fn write(&self, w: &mut ByteWriter) {
        w.put_u8(self.kind().tag());
        dispatch!(self, v => v.write(w));
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        match BitVectorKind::from_tag(r.get_u8()?)? {
            BitVectorKind::Plain => Ok(BitVector::Plain(PlainBitVector::read(r)?)),
            BitVectorKind::Gap => Ok(BitVector::Gap(GapBitVector::read(r)?)),
            BitVectorKind::Rle => Ok(BitVector::Rle(RleBitVector::read(r)?)),
        }
    }
}

/// Uniform streaming builder over the three encodings; positions must be
/// pushed strictly increasing.
pub enum BitVectorBuilder {
    Plain(PlainBuilder),
    Gap(GapBuilder),
    Rle(RleBuilder),
}

impl BitVectorBuilder {
    pub fn new(kind: BitVectorKind) -> Self {
        match kind {
            BitVectorKind::Plain => BitVectorBuilder::Plain(PlainBuilder::new()),
            BitVectorKind::Gap => BitVectorBuilder::Gap(GapBuilder::new()),
            BitVectorKind::Rle => BitVectorBuilder::Rle(RleBuilder::new()),
        }
    }

    pub fn push_one(&mut self, pos: u64) {
        match self {
            BitVectorBuilder::Plain(b) => b.push_one(pos),
            BitVectorBuilder::Gap(b) => b.push_one(pos),
            BitVectorBuilder::Rle(b) => b.push_one(pos),
        }
    }

    pub fn finish(self, len: u64) -> BitVector {
        match self {
            BitVectorBuilder::Plain(b) => BitVector::Plain(b.finish(len)),
            BitVectorBuilder::Gap(b) => BitVector::Gap(b.finish(len)),
            BitVectorBuilder::Rle(b) => BitVector::Rle(b.finish(len)),
        }
    }
}

/// Builds a vector of the given kind from sorted 1-based one-positions.
pub fn bit_vector_from_ones(kind: BitVectorKind, ones: &[u64], len: u64) -> BitVector {
    let mut b = BitVectorBuilder::new(kind);
    for &pos in ones {
        b.push_one(pos);
    }
    b.finish(len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_codeword_shapes_are_pinned() {
        // 1 -> "1" (one bit); 2 -> "0100" (four bits), LSB-first in the word.
        let mut buf = BitBuf::new();
        delta_encode(&mut buf, 1);
        assert_eq!(buf.len(), 1);
        assert_eq!(buf.words(), &[0b1]);

        let mut buf = BitBuf::new();
        delta_encode(&mut buf, 2);
        assert_eq!(buf.len(), 4);
        assert_eq!(buf.words(), &[0b0010]);

        assert_eq!(delta_code_len(1), 1);
        assert_eq!(delta_code_len(2), 4);
        for v in 1..=1000u64 {
            let l = 63 - v.leading_zeros() as u64; // floor(log2 v)
            let expected = l + 2 * ((l + 1) as f64).log2().floor() as u64 + 1;
            assert_eq!(delta_code_len(v), expected, "length formula at {v}");
            let mut buf = BitBuf::new();
            delta_encode(&mut buf, v);
            assert_eq!(buf.len(), expected);
        }
    }

    #[test]
    fn delta_round_trips() {
        let values: Vec<u64> = (1..400)
            .chain([1 << 20, (1 << 33) + 12345, u64::MAX / 2, u64::MAX])
            .collect();
        let mut buf = BitBuf::new();
        for &v in &values {
            delta_encode(&mut buf, v);
        }
        let mut cur = BitCursor::at(buf.words(), 0);
        for &v in &values {
            assert_eq!(delta_decode(&mut cur), v);
        }
        assert_eq!(cur.pos(), buf.len());
    }

    #[test]
    fn bitbuf_is_lsb_first() {
        let mut buf = BitBuf::new();
        for bit in [true, false, false, true, true] {
            buf.push_bit(bit);
        }
        assert_eq!(buf.words(), &[0b11001]);

        let mut buf = BitBuf::new();
        buf.push_bits_msb(0b1101, 4);
        // MSB-first append: bits 1,1,0,1 land at stream offsets 0..4.
        assert_eq!(buf.words(), &[0b1011]);
    }
}
