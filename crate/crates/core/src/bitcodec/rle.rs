//! Run-length encoded bit vector: alternating run lengths, Elias-delta coded.

use super::{delta_decode, delta_encode, BitBuf, BitCursor, DEFAULT_BLOCK};
use crate::error::{Error, Result};
use crate::serialize::{ByteReader, ByteWriter};

/// Bit vector stored as its maximal runs. The stream holds the run lengths
/// in order; run t carries bit `first_bit XOR (t odd)`. A directory entry
/// per block of runs records the bit offset plus the positions and ones
/// consumed before the block, so every query decodes at most one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RleBitVector {
    len: u64,
    ones: u64,
    first_bit: bool,
    n_runs: usize,
    block: usize,
    words: Vec<u64>,
    bit_len: u64,
    dir_offsets: Vec<u64>,
    dir_pos: Vec<u64>,
    dir_ones: Vec<u64>,
}

impl RleBitVector {
    pub fn from_one_positions(ones: &[u64], len: u64) -> Self {
        let mut b = RleBuilder::new();
        for &pos in ones {
            b.push_one(pos);
        }
        b.finish(len)
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> u64 {
        self.ones
    }

    pub fn count_zeros(&self) -> u64 {
        self.len - self.ones
    }

    pub fn run_count(&self) -> usize {
        self.n_runs
    }

    fn run_bit(&self, t: usize) -> bool {
        self.first_bit ^ (t % 2 == 1)
    }

    pub fn get(&self, pos: u64) -> bool {
        assert!(
            pos >= 1 && pos <= self.len,
            "position {pos} out of range 1..={}",
            self.len
        );
        // Last block starting before pos, then walk runs.
        let j = self.dir_pos.partition_point(|&p| p < pos) - 1;
        let mut cur = BitCursor::at(&self.words, self.dir_offsets[j]);
        let mut p = self.dir_pos[j];
        let mut t = j * self.block;
        loop {
            let v = delta_decode(&mut cur);
            if p + v >= pos {
                return self.run_bit(t);
            }
            p += v;
            t += 1;
        }
    }

    pub fn rank1(&self, pos: u64) -> u64 {
        assert!(
            pos <= self.len,
            "rank position {pos} out of range 0..={}",
            self.len
        );
        if pos == 0 {
            return 0;
        }
        let j = self.dir_pos.partition_point(|&p| p < pos) - 1;
        let mut cur = BitCursor::at(&self.words, self.dir_offsets[j]);
        let mut p = self.dir_pos[j];
        let mut o = self.dir_ones[j];
        let mut t = j * self.block;
        loop {
            let v = delta_decode(&mut cur);
            if p + v >= pos {
                if self.run_bit(t) {
                    o += pos - p;
                }
                return o;
            }
            p += v;
            if self.run_bit(t) {
                o += v;
            }
            t += 1;
        }
    }

    pub fn rank0(&self, pos: u64) -> u64 {
        pos - self.rank1(pos)
    }

    pub fn select1(&self, k: u64) -> u64 {
        assert!(
            k >= 1 && k <= self.ones,
            "select1 argument {k} out of range 1..={}",
            self.ones
        );
        let j = self.dir_ones.partition_point(|&o| o < k) - 1;
        let mut cur = BitCursor::at(&self.words, self.dir_offsets[j]);
        let mut p = self.dir_pos[j];
        let mut o = self.dir_ones[j];
        let mut t = j * self.block;
        loop {
            let v = delta_decode(&mut cur);
            if self.run_bit(t) {
                if o + v >= k {
                    return p + (k - o);
                }
                o += v;
            }
            p += v;
            t += 1;
        }
    }

    pub fn select0(&self, k: u64) -> u64 {
        let zeros = self.len - self.ones;
        assert!(
            k >= 1 && k <= zeros,
            "select0 argument {k} out of range 1..={zeros}"
        );
        let zeros_before = |j: usize| self.dir_pos[j] - self.dir_ones[j];
        let mut lo = 0usize;
        let mut hi = self.dir_pos.len() - 1;
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if zeros_before(mid) < k {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let mut cur = BitCursor::at(&self.words, self.dir_offsets[lo]);
        let mut p = self.dir_pos[lo];
        let mut z = zeros_before(lo);
        let mut t = lo * self.block;
        loop {
            let v = delta_decode(&mut cur);
            if !self.run_bit(t) {
                if z + v >= k {
                    return p + (k - z);
                }
                z += v;
            }
            p += v;
            t += 1;
        }
    }

    pub fn size_in_bits(&self) -> u64 {
        self.bit_len + 192 * self.dir_offsets.len() as u64
    }

    pub fn write(&self, w: &mut ByteWriter) {
        w.put_u64(self.len);
        w.put_u64(self.ones);
        w.put_u8(self.first_bit as u8);
        w.put_u64(self.n_runs as u64);
        w.put_u32(self.block as u32);
        w.put_u64(self.bit_len);
        w.put_u64_slice(&self.words);
        w.put_u64_slice(&self.dir_offsets);
        w.put_u64_slice(&self.dir_pos);
        w.put_u64_slice(&self.dir_ones);
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let len = r.get_u64()?;
        let ones = r.get_u64()?;
        let first_bit = r.get_u8()? != 0;
        let n_runs = r.get_u64()? as usize;
        let block = r.get_u32()? as usize;
        let bit_len = r.get_u64()?;
        let words = r.get_u64_vec()?;
        let dir_offsets = r.get_u64_vec()?;
        let dir_pos = r.get_u64_vec()?;
        let dir_ones = r.get_u64_vec()?;
        if block == 0
            || ones > len
            || words.len() as u64 * 64 < bit_len
            || dir_offsets.len() != dir_pos.len()
            || dir_offsets.len() != dir_ones.len()
            || dir_offsets.len() != n_runs.div_ceil(block)
            || (n_runs == 0) != (len == 0)
        {
            return Err(Error::MalformedData(
                "rle bit vector sections disagree".into(),
            ));
        }
        Ok(RleBitVector {
            len,
            ones,
            first_bit,
            n_runs,
            block,
            words,
            bit_len,
            dir_offsets,
            dir_pos,
            dir_ones,
        })
    }
}

/// Builder over strictly increasing one-positions.
pub struct RleBuilder {
    buf: BitBuf,
    block: usize,
    n_runs: usize,
    dir_offsets: Vec<u64>,
    dir_pos: Vec<u64>,
    dir_ones: Vec<u64>,
    first_bit: bool,
    // Length of the one-run currently being extended, if any.
    open_run: u64,
    last: u64,
    ones: u64,
    pos_done: u64,
    ones_done: u64,
}

impl Default for RleBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl RleBuilder {
    pub fn new() -> Self {
        RleBuilder {
            buf: BitBuf::new(),
            block: DEFAULT_BLOCK,
            n_runs: 0,
            dir_offsets: Vec::new(),
            dir_pos: Vec::new(),
            dir_ones: Vec::new(),
            first_bit: false,
            open_run: 0,
            last: 0,
            ones: 0,
            pos_done: 0,
            ones_done: 0,
        }
    }

    fn emit_run(&mut self, bit: bool, len: u64) {
        debug_assert!(len >= 1);
        if self.n_runs == 0 {
            self.first_bit = bit;
        }
        if self.n_runs.is_multiple_of(self.block) {
            self.dir_offsets.push(self.buf.len());
            self.dir_pos.push(self.pos_done);
            self.dir_ones.push(self.ones_done);
        }
        delta_encode(&mut self.buf, len);
        self.n_runs += 1;
        self.pos_done += len;
        if bit {
            self.ones_done += len;
        }
    }

    pub fn push_one(&mut self, pos: u64) {
        assert!(pos > self.last, "one positions must be strictly increasing");
        if pos == self.last + 1 && self.open_run > 0 {
            self.open_run += 1;
        } else {
            if self.open_run > 0 {
                self.emit_run(true, self.open_run);
            }
            if pos > self.last + 1 {
                self.emit_run(false, pos - self.last - 1);
            }
            self.open_run = 1;
        }
        self.last = pos;
        self.ones += 1;
    }

    pub fn finish(mut self, len: u64) -> RleBitVector {
        assert!(
            len >= self.last,
            "length {len} below highest one position {}",
            self.last
        );
        if self.open_run > 0 {
            let run = self.open_run;
            self.emit_run(true, run);
        }
        if len > self.last {
            self.emit_run(false, len - self.last);
        }
        debug_assert_eq!(self.pos_done, len);
        debug_assert_eq!(self.ones_done, self.ones);
        RleBitVector {
            len,
            ones: self.ones,
            first_bit: self.first_bit,
            n_runs: self.n_runs,
            block: self.block,
            bit_len: self.buf.len(),
            words: self.buf.into_words(),
            dir_offsets: self.dir_offsets,
            dir_pos: self.dir_pos,
            dir_ones: self.dir_ones,
        }
    }
}
