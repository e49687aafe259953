//! Fixed-width packed integer vectors.

use crate::error::{Error, Result};
use crate::serialize::{ByteReader, ByteWriter};

/// Immutable vector of `len` integers, each stored in `width` bits,
/// bit-packed LSB-first into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntVector {
    width: u32,
    len: usize,
    words: Vec<u64>,
}

impl IntVector {
    /// Packs the values at the smallest width that fits the maximum.
    pub fn from_values(values: &[u64]) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        let width = (64 - max.leading_zeros()).max(1);
        let mut b = IntVectorBuilder::with_width(width);
        for &v in values {
            b.push(v);
        }
        b.finish()
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The k-th value, 1-based.
    #[inline]
    pub fn get(&self, k: usize) -> u64 {
        assert!(
            k >= 1 && k <= self.len,
            "value index {k} out of range 1..={}",
            self.len
        );
        let start = (k - 1) as u64 * self.width as u64;
        let word = (start / 64) as usize;
        let shift = start % 64;
        let mask = if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        };
        let mut v = self.words[word] >> shift;
        if shift + self.width as u64 > 64 {
            v |= self.words[word + 1] << (64 - shift);
        }
        v & mask
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.len).map(move |k| self.get(k))
    }

    pub fn size_in_bits(&self) -> u64 {
        self.words.len() as u64 * 64
    }

    pub fn write(&self, w: &mut ByteWriter) {
        w.put_u32(self.width);
        w.put_u64(self.len as u64);
        w.put_u64_slice(&self.words);
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let width = r.get_u32()?;
        let len = r.get_u64()? as usize;
        let words = r.get_u64_vec()?;
        if width == 0 || width > 64 {
            return Err(Error::MalformedData(format!(
                "integer width {width} out of range 1..=64"
            )));
        }
        if words.len() != (len as u64 * width as u64).div_ceil(64) as usize {
            return Err(Error::MalformedData(
                "integer vector word count disagrees".into(),
            ));
        }
        Ok(IntVector { width, len, words })
    }
}

pub struct IntVectorBuilder {
    width: u32,
    len: usize,
    words: Vec<u64>,
    bit_len: u64,
}

impl IntVectorBuilder {
    pub fn with_width(width: u32) -> Self {
        assert!((1..=64).contains(&width));
        IntVectorBuilder {
            width,
            len: 0,
            words: Vec::new(),
            bit_len: 0,
        }
    }

    pub fn push(&mut self, v: u64) {
        debug_assert!(
            self.width == 64 || v < (1u64 << self.width),
            "value {v} wider than {}",
            self.width
        );
        let word = (self.bit_len / 64) as usize;
        let shift = self.bit_len % 64;
        if word == self.words.len() {
            self.words.push(0);
        }
        self.words[word] |= v << shift;
        if shift + self.width as u64 > 64 {
            self.words.push(v >> (64 - shift));
        }
        self.bit_len += self.width as u64;
        self.len += 1;
    }

    pub fn finish(self) -> IntVector {
        IntVector {
            width: self.width,
            len: self.len,
            words: self.words,
        }
    }
}
