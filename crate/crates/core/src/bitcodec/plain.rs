//! Uncompressed bit vector with superblock rank and sampled select hints.

use crate::error::{Error, Result};
use crate::serialize::{ByteReader, ByteWriter};

const SUPER_BITS: u64 = 512;
const WORDS_PER_SUPER: usize = (SUPER_BITS / 64) as usize;
const SELECT_SAMPLE: u64 = 4096;

/// Plain bit array storing one physical bit per position, with a rank
/// directory every 512 bits and select hints every 4096 ones/zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainBitVector {
    len: u64,
    ones: u64,
    words: Vec<u64>,
    // super_ranks[s] = ones strictly before superblock s; one guard entry.
    super_ranks: Vec<u64>,
    // select1_hints[h] = superblock containing one number h*4096 + 1; guard.
    select1_hints: Vec<u32>,
    select0_hints: Vec<u32>,
}

impl PlainBitVector {
    pub fn from_words(words: Vec<u64>, len: u64) -> Self {
        let mut b = PlainBuilder { words, max_pos: 0 };
        b.words.resize(super_word_count(len), 0);
        if !len.is_multiple_of(64) {
            let last = (len / 64) as usize;
            b.words[last] &= (1u64 << (len % 64)) - 1;
        }
        b.finish(len)
    }

    pub fn from_one_positions(ones: &[u64], len: u64) -> Self {
        let mut b = PlainBuilder::new();
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

    /// The bit at 1-based position `pos`.
    pub fn get(&self, pos: u64) -> bool {
        assert!(
            pos >= 1 && pos <= self.len,
            "position {pos} out of range 1..={}",
            self.len
        );
        let i = pos - 1;
        (self.words[(i / 64) as usize] >> (i % 64)) & 1 == 1
    }

    /// Ones among positions `1..=pos`; `rank1(0) == 0`.
    pub fn rank1(&self, pos: u64) -> u64 {
        assert!(
            pos <= self.len,
            "rank position {pos} out of range 0..={}",
            self.len
        );
        let sb = (pos / SUPER_BITS) as usize;
        let mut r = self.super_ranks[sb.min(self.super_ranks.len() - 1)];
        let mut w = sb * WORDS_PER_SUPER;
        let w_end = (pos / 64) as usize;
        while w < w_end {
            r += self.words[w].count_ones() as u64;
            w += 1;
        }
        let rem = pos % 64;
        if rem > 0 {
            r += (self.words[w_end] & ((1u64 << rem) - 1)).count_ones() as u64;
        }
        r
    }

    pub fn rank0(&self, pos: u64) -> u64 {
        pos - self.rank1(pos)
    }

    /// 1-based position of the k-th one, `1 <= k <= count_ones()`.
    pub fn select1(&self, k: u64) -> u64 {
        assert!(
            k >= 1 && k <= self.ones,
            "select1 argument {k} out of range 1..={}",
            self.ones
        );
        let h = ((k - 1) / SELECT_SAMPLE) as usize;
        let lo = self.select1_hints[h] as usize;
        let hi = self.select1_hints[(h + 1).min(self.select1_hints.len() - 1)] as usize + 1;
        // Last superblock s in lo..=hi with super_ranks[s] < k, then scan it.
        let sb = lo + self.super_ranks[lo..=hi].partition_point(|&r| r < k) - 1;
        let mut remaining = k - self.super_ranks[sb];
        let mut w = sb * WORDS_PER_SUPER;
        loop {
            let c = self.words[w].count_ones() as u64;
            if c >= remaining {
                return w as u64 * 64 + select_in_word(self.words[w], remaining) + 1;
            }
            remaining -= c;
            w += 1;
        }
    }

    /// 1-based position of the k-th zero, `1 <= k <= count_zeros()`.
    pub fn select0(&self, k: u64) -> u64 {
        assert!(
            k >= 1 && k <= self.len - self.ones,
            "select0 argument {k} out of range 1..={}",
            self.len - self.ones
        );
        let h = ((k - 1) / SELECT_SAMPLE) as usize;
        let zeros_before = |s: usize| s as u64 * SUPER_BITS - self.super_ranks[s];
        // Last superblock in the hinted range with fewer than k zeros before it.
        let mut a = self.select0_hints[h] as usize;
        let mut b = (self.select0_hints[(h + 1).min(self.select0_hints.len() - 1)] as usize + 1)
            .min(self.super_ranks.len() - 1);
        while a < b {
            let mid = (a + b).div_ceil(2);
            if zeros_before(mid) < k {
                a = mid;
            } else {
                b = mid - 1;
            }
        }
        let sb = a;
        let mut remaining = k - zeros_before(sb);
        let mut w = sb * WORDS_PER_SUPER;
        loop {
            let c = self.words[w].count_zeros() as u64;
            if c >= remaining {
                return w as u64 * 64 + select_in_word(!self.words[w], remaining) + 1;
            }
            remaining -= c;
            w += 1;
        }
    }

    /// Payload plus directory size in bits.
    pub fn size_in_bits(&self) -> u64 {
        self.words.len() as u64 * 64
            + self.super_ranks.len() as u64 * 64
            + (self.select1_hints.len() + self.select0_hints.len()) as u64 * 32
    }

    pub fn write(&self, w: &mut ByteWriter) {
        w.put_u64(self.len);
        w.put_u64(self.ones);
        w.put_u64_slice(&self.words);
        w.put_u64_slice(&self.super_ranks);
        w.put_u32_slice(&self.select1_hints);
        w.put_u32_slice(&self.select0_hints);
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let len = r.get_u64()?;
        let ones = r.get_u64()?;
        let words = r.get_u64_vec()?;
        let super_ranks = r.get_u64_vec()?;
        let select1_hints = r.get_u32_vec()?;
        let select0_hints = r.get_u32_vec()?;
        if ones > len || words.len() != super_word_count(len) {
            return Err(Error::MalformedData(
                "plain bit vector sections disagree".into(),
            ));
        }
        let rebuilt = directories(&words, len);
        if super_ranks != rebuilt.0 || select1_hints != rebuilt.1 || select0_hints != rebuilt.2 {
            return Err(Error::MalformedData(
                "plain bit vector directory disagrees".into(),
            ));
        }
        Ok(PlainBitVector {
            len,
            ones,
            words,
            super_ranks,
            select1_hints,
            select0_hints,
        })
    }
}

/// Position (0-based within the word) of the k-th set bit, `1 <= k <= popcount`.
#[inline]
fn select_in_word(mut word: u64, k: u64) -> u64 {
    for _ in 1..k {
        word &= word - 1;
    }
    word.trailing_zeros() as u64
}

fn super_word_count(len: u64) -> usize {
    // Whole superblocks so rank/select scans never index past the slice.
    (len.div_ceil(SUPER_BITS) * WORDS_PER_SUPER as u64).max(WORDS_PER_SUPER as u64) as usize
}

#[allow(clippy::type_complexity)]
fn directories(words: &[u64], len: u64) -> (Vec<u64>, Vec<u32>, Vec<u32>) {
    let n_super = words.len() / WORDS_PER_SUPER;
    let mut super_ranks = Vec::with_capacity(n_super + 1);
    let mut ones = 0u64;
    for s in 0..n_super {
        super_ranks.push(ones);
        for w in 0..WORDS_PER_SUPER {
            ones += words[s * WORDS_PER_SUPER + w].count_ones() as u64;
        }
    }
    super_ranks.push(ones);
    let zeros = len - ones;

    let hints = |count: u64, rank_before: &dyn Fn(usize) -> u64| -> Vec<u32> {
        let mut hints = Vec::with_capacity((count / SELECT_SAMPLE + 2) as usize);
        let mut s = 0usize;
        let mut k = 1u64;
        while k <= count {
            while rank_before(s + 1) < k {
                s += 1;
            }
            hints.push(s as u32);
            k += SELECT_SAMPLE;
        }
        hints.push(n_super.saturating_sub(1) as u32);
        hints
    };
    let select1_hints = hints(ones, &|s| super_ranks[s]);
    let select0_hints = hints(zeros.min(len), &|s| {
        (s as u64 * SUPER_BITS).min(len) - super_ranks[s]
    });
    (super_ranks, select1_hints, select0_hints)
}

/// Append-style builder; `push_one` positions may arrive in any order.
pub struct PlainBuilder {
    words: Vec<u64>,
    max_pos: u64,
}

impl Default for PlainBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl PlainBuilder {
    pub fn new() -> Self {
        PlainBuilder {
            words: Vec::new(),
            max_pos: 0,
        }
    }

    pub fn push_one(&mut self, pos: u64) {
        assert!(pos >= 1);
        let i = pos - 1;
        let word = (i / 64) as usize;
        if word >= self.words.len() {
            self.words.resize(word + 1, 0);
        }
        self.words[word] |= 1u64 << (i % 64);
        self.max_pos = self.max_pos.max(pos);
    }

    pub fn finish(mut self, len: u64) -> PlainBitVector {
        assert!(
            len >= self.max_pos,
            "length {len} below highest set position {}",
            self.max_pos
        );
        self.words.resize(super_word_count(len), 0);
        let (super_ranks, select1_hints, select0_hints) = directories(&self.words, len);
        let ones = *super_ranks.last().unwrap();
        PlainBitVector {
            len,
            ones,
            words: self.words,
            super_ranks,
            select1_hints,
            select0_hints,
        }
    }
}
