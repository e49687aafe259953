//! Sparse bit vector storing Elias-delta coded gaps between one-positions.

use super::{delta_decode, DeltaStream, DeltaStreamBuilder};
use crate::error::{Error, Result};
use crate::serialize::{ByteReader, ByteWriter};

/// Bit vector for sparse one-sets: value k of the underlying stream is the
/// gap from one number k-1 to one number k (the first gap is the first
/// position itself), so `select1` is a prefix sum and `rank1` a prefix
/// search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapBitVector {
    len: u64,
    gaps: DeltaStream,
}

impl GapBitVector {
    pub fn from_one_positions(ones: &[u64], len: u64) -> Self {
        let mut b = GapBuilder::new();
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
        self.gaps.len() as u64
    }

    pub fn count_zeros(&self) -> u64 {
        self.len - self.count_ones()
    }

    pub fn get(&self, pos: u64) -> bool {
        assert!(
            pos >= 1 && pos <= self.len,
            "position {pos} out of range 1..={}",
            self.len
        );
        match self.gaps.find_by_prefix(pos) {
            Some(k) => self.gaps.prefix_sum(k) == pos,
            None => false,
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
        match self.gaps.find_by_prefix(pos + 1) {
            Some(k) => k as u64 - 1,
            None => self.count_ones(),
        }
    }

    pub fn rank0(&self, pos: u64) -> u64 {
        pos - self.rank1(pos)
    }

    pub fn select1(&self, k: u64) -> u64 {
        assert!(
            k >= 1 && k <= self.count_ones(),
            "select1 argument {k} out of range 1..={}",
            self.count_ones()
        );
        self.gaps.prefix_sum(k as usize)
    }

    pub fn select0(&self, k: u64) -> u64 {
        assert!(
            k >= 1 && k <= self.count_zeros(),
            "select0 argument {k} out of range 1..={}",
            self.count_zeros()
        );
        // The k-th zero sits after t ones, where t is the largest count with
        // select1(t) - t < k; the answer is then k + t. The directory gives
        // the block, one block of decoding gives t.
        let dir_sums = self.gaps.dir_sums();
        let block = self.gaps.block();
        if dir_sums.is_empty() {
            return k;
        }
        let zeros_before_block = |j: usize| dir_sums[j] - (j * block) as u64;
        let mut lo = 0usize;
        let mut hi = dir_sums.len() - 1;
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if zeros_before_block(mid) < k {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let j = lo;
        let (mut cur, mut sum, mut t) = self.gaps.cursor_at_block(j);
        while t < self.gaps.len() {
            let v = delta_decode(&mut cur);
            if sum + v - (t as u64 + 1) >= k {
                break;
            }
            sum += v;
            t += 1;
        }
        k + t as u64
    }

    pub fn size_in_bits(&self) -> u64 {
        self.gaps.size_in_bits()
    }

    pub fn write(&self, w: &mut ByteWriter) {
        w.put_u64(self.len);
        self.gaps.write(w);
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let len = r.get_u64()?;
        let gaps = DeltaStream::read(r)?;
        if gaps.total() > len {
            return Err(Error::MalformedData(
                "gap vector ones extend past its length".into(),
            ));
        }
        Ok(GapBitVector { len, gaps })
    }
}

/// Builder over strictly increasing one-positions.
pub struct GapBuilder {
    gaps: DeltaStreamBuilder,
    last: u64,
}

impl Default for GapBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl GapBuilder {
    pub fn new() -> Self {
        GapBuilder {
            gaps: DeltaStreamBuilder::new(),
            last: 0,
        }
    }

    pub fn push_one(&mut self, pos: u64) {
        assert!(pos > self.last, "one positions must be strictly increasing");
        self.gaps.push(pos - self.last);
        self.last = pos;
    }

    pub fn finish(self, len: u64) -> GapBitVector {
        assert!(
            len >= self.last,
            "length {len} below highest one position {}",
            self.last
        );
        GapBitVector {
            len,
            gaps: self.gaps.finish(),
        }
    }
}
