//! Elias-delta coded sequences of positive integers with a block directory.

use super::{delta_decode, delta_encode, BitBuf, BitCursor, DEFAULT_BLOCK};
use crate::error::{Error, Result};
use crate::serialize::{ByteReader, ByteWriter};

/// An immutable sequence of values `>= 1`, Elias-delta coded, with one
/// directory entry per block of `block` values recording the bit offset and
/// the running sum up to that value. Random access and prefix-sum queries
/// decode at most one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaStream {
    words: Vec<u64>,
    bit_len: u64,
    len: usize,
    block: usize,
    total: u64,
    dir_offsets: Vec<u64>,
    dir_sums: Vec<u64>,
}

impl DeltaStream {
    pub fn from_values(values: &[u64]) -> Self {
        let mut b = DeltaStreamBuilder::new();
        for &v in values {
            b.push(v);
        }
        b.finish()
    }

    /// Number of values.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Sum of all values.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn block(&self) -> usize {
        self.block
    }

    /// Payload size in bits.
    pub fn payload_bits(&self) -> u64 {
        self.bit_len
    }

    /// Payload plus directory size in bits.
    pub fn size_in_bits(&self) -> u64 {
        self.bit_len + 128 * self.dir_offsets.len() as u64
    }

    /// The k-th value, 1-based.
    pub fn get(&self, k: usize) -> u64 {
        assert!(
            k >= 1 && k <= self.len,
            "value index {k} out of range 1..={}",
            self.len
        );
        let j = (k - 1) / self.block;
        let mut cur = BitCursor::at(&self.words, self.dir_offsets[j]);
        for _ in j * self.block..k - 1 {
            delta_decode(&mut cur);
        }
        delta_decode(&mut cur)
    }

    /// Sum of the first `k` values (`prefix_sum(0) == 0`).
    pub fn prefix_sum(&self, k: usize) -> u64 {
        assert!(
            k <= self.len,
            "prefix length {k} out of range 0..={}",
            self.len
        );
        if k == 0 {
            return 0;
        }
        let j = (k / self.block).min(self.dir_offsets.len() - 1);
        let mut cur = BitCursor::at(&self.words, self.dir_offsets[j]);
        let mut sum = self.dir_sums[j];
        for _ in j * self.block..k {
            sum += delta_decode(&mut cur);
        }
        sum
    }

    /// Smallest `k` with `prefix_sum(k) >= target`, for `target >= 1`;
    /// `None` when `target > total`.
    pub fn find_by_prefix(&self, target: u64) -> Option<usize> {
        assert!(target >= 1);
        if target > self.total {
            return None;
        }
        let j = self.dir_sums.partition_point(|&s| s < target) - 1;
        let mut cur = BitCursor::at(&self.words, self.dir_offsets[j]);
        let mut sum = self.dir_sums[j];
        let mut k = j * self.block;
        loop {
            sum += delta_decode(&mut cur);
            k += 1;
            if sum >= target {
                return Some(k);
            }
        }
    }

    /// Sequential decoder over all values.
    pub fn iter(&self) -> DeltaIter<'_> {
        DeltaIter {
            cur: BitCursor::at(&self.words, 0),
            remaining: self.len,
        }
    }

    /// Cursor positioned at the first value of directory block `j`, together
    /// with the running sum and the count of values before it.
    pub(crate) fn cursor_at_block(&self, j: usize) -> (BitCursor<'_>, u64, usize) {
        (
            BitCursor::at(&self.words, self.dir_offsets[j]),
            self.dir_sums[j],
            j * self.block,
        )
    }

    pub(crate) fn dir_sums(&self) -> &[u64] {
        &self.dir_sums
    }

    pub fn write(&self, w: &mut ByteWriter) {
        w.put_u64(self.len as u64);
        w.put_u64(self.bit_len);
        w.put_u64(self.total);
        w.put_u32(self.block as u32);
        w.put_u64_slice(&self.words);
        w.put_u64_slice(&self.dir_offsets);
        w.put_u64_slice(&self.dir_sums);
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let len = r.get_u64()? as usize;
        let bit_len = r.get_u64()?;
        let total = r.get_u64()?;
        let block = r.get_u32()? as usize;
        if block == 0 {
            return Err(Error::MalformedData(
                "delta stream block size is zero".into(),
            ));
        }
        let words = r.get_u64_vec()?;
        let dir_offsets = r.get_u64_vec()?;
        let dir_sums = r.get_u64_vec()?;
        if words.len() as u64 * 64 < bit_len || dir_offsets.len() != dir_sums.len() {
            return Err(Error::MalformedData(
                "delta stream sections disagree".into(),
            ));
        }
        let expected_dirs = len.div_ceil(block);
        if dir_offsets.len() != expected_dirs {
            return Err(Error::MalformedData(format!(
                "delta stream has {} directory entries, expected {expected_dirs}",
                dir_offsets.len()
            )));
        }
        Ok(DeltaStream {
            words,
            bit_len,
            len,
            block,
            total,
            dir_offsets,
            dir_sums,
        })
    }
}

pub struct DeltaIter<'a> {
    cur: BitCursor<'a>,
    remaining: usize,
}

impl Iterator for DeltaIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(delta_decode(&mut self.cur))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for DeltaIter<'_> {}

/// Append-only builder for [`DeltaStream`].
pub struct DeltaStreamBuilder {
    buf: BitBuf,
    len: usize,
    block: usize,
    total: u64,
    dir_offsets: Vec<u64>,
    dir_sums: Vec<u64>,
}

impl Default for DeltaStreamBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl DeltaStreamBuilder {
    pub fn new() -> Self {
        Self::with_block(DEFAULT_BLOCK)
    }

    pub fn with_block(block: usize) -> Self {
        assert!(block >= 1);
        DeltaStreamBuilder {
            buf: BitBuf::new(),
            len: 0,
            block,
            total: 0,
            dir_offsets: Vec::new(),
            dir_sums: Vec::new(),
        }
    }

    pub fn push(&mut self, v: u64) {
        if self.len.is_multiple_of(self.block) {
            self.dir_offsets.push(self.buf.len());
            self.dir_sums.push(self.total);
        }
        delta_encode(&mut self.buf, v);
        self.len += 1;
        self.total += v;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn finish(self) -> DeltaStream {
        DeltaStream {
            bit_len: self.buf.len(),
            words: self.buf.into_words(),
            len: self.len,
            block: self.block,
            total: self.total,
            dir_offsets: self.dir_offsets,
            dir_sums: self.dir_sums,
        }
    }
}
