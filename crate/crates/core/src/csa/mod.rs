//! The compressed suffix array: run-length BWT with Psi and LF, backward
//! search, and sample-based locate/display.

mod rlebwt;

pub use rlebwt::RleBwt;

use crate::bitcodec::{IntVector, IntVectorBuilder, PlainBitVector, PlainBuilder};
use crate::error::{Error, Result};
use crate::serialize::{open_container, seal_container, ByteReader, ByteWriter, INDEX_MAGIC};
use crate::suffixcore::{inverse_permutation, suffix_array};
use crate::textstore::{AlphabetMap, Indexable};
use serde::Serialize;

/// Compressed suffix array over one sequence.
///
/// Holds the run-length BWT, the symbol boundary array `C` (where class `c`
/// owns suffix array positions `C[c]+1 ..= C[c+1]`), suffix array samples at
/// values congruent to 1 modulo `d` (plus the position of suffix `n`), and
/// inverse samples at text positions `1 + kd`.
///
/// Position arithmetic is cyclic at the text boundary: at the suffix array
/// position of suffix `n`, `psi` returns the position of suffix 1, and `lf`
/// inverts that, so iteration never needs a special case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Csa {
    n: u64,
    alpha: u32,
    d: u32,
    c_array: Vec<u64>,
    bwt: RleBwt,
    sa_marks: PlainBitVector,
    sa_values: IntVector,
    isa_samples: IntVector,
    alphabet: AlphabetMap,
}

/// Builds the index for a sequence with suffix array sample rate `d`.
pub fn build_csa(text: &impl Indexable, d: u32) -> Result<Csa> {
    if d == 0 {
        return Err(Error::InvalidParameter(
            "sample rate d must be at least 1".into(),
        ));
    }
    if text.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sa = suffix_array(text.symbols());
    Ok(Csa::from_suffix_array(text, &sa, d))
}

impl Csa {
    /// Assembles the index from an already computed suffix array.
    pub(crate) fn from_suffix_array(text: &impl Indexable, sa: &[u32], d: u32) -> Csa {
        let symbols = text.symbols();
        let n = symbols.len() as u64;
        let alpha = text.alpha_size();

        let mut c_array = vec![0u64; alpha as usize + 1];
        for &c in symbols {
            c_array[c as usize + 1] += 1;
        }
        for c in 0..alpha as usize {
            c_array[c + 1] += c_array[c];
        }

        let bwt = RleBwt::from_symbols(
            sa.iter().map(|&v| {
                if v == 1 {
                    symbols[symbols.len() - 1]
                } else {
                    symbols[v as usize - 2]
                }
            }),
            alpha,
        );

        let sampled = |v: u64| v % d as u64 == 1 % d as u64 || v == n;
        let mut marks = PlainBuilder::new();
        let mut values = Vec::new();
        for (x0, &v) in sa.iter().enumerate() {
            if sampled(v as u64) {
                marks.push_one(x0 as u64 + 1);
                values.push(v as u64);
            }
        }
        let sa_marks = marks.finish(n);
        let sa_values = IntVector::from_values(&values);

        let isa = inverse_permutation(sa);
        let mut isa_b = IntVectorBuilder::with_width((64 - n.leading_zeros()).max(1));
        let mut pos = 1u64;
        while pos <= n {
            isa_b.push(isa[pos as usize - 1] as u64);
            pos += d as u64;
        }
        let isa_samples = isa_b.finish();

        Csa {
            n,
            alpha,
            d,
            c_array,
            bwt,
            sa_marks,
            sa_values,
            isa_samples,
            alphabet: text.alphabet().clone(),
        }
    }

    /// Sequence length, including the final terminator/end symbol.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of symbol classes.
    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// Suffix array sample rate.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// Number of equal-symbol runs in the BWT.
    pub fn run_count(&self) -> usize {
        self.bwt.run_count()
    }

    pub fn c_array(&self) -> &[u64] {
        &self.c_array
    }

    pub fn bwt(&self) -> &RleBwt {
        &self.bwt
    }

    pub fn alphabet(&self) -> &AlphabetMap {
        &self.alphabet
    }

    fn class_of(&self, x: u64) -> u32 {
        debug_assert!(x >= 1 && x <= self.n);
        (self.c_array.partition_point(|&v| v < x) - 1) as u32
    }

    /// The suffix array position of the suffix one text position to the
    /// right: `sa[psi(x)] == sa[x] + 1`, wrapping from suffix `n` to
    /// suffix 1. Panics when `x` is out of `1..=n`.
    pub fn psi(&self, x: u64) -> u64 {
        assert!(
            x >= 1 && x <= self.n,
            "position {x} out of range 1..={}",
            self.n
        );
        let c = self.class_of(x);
        self.bwt.select(c, x - self.c_array[c as usize])
    }

    /// Inverse of [`psi`](Self::psi): one text position to the left.
    pub fn lf(&self, x: u64) -> u64 {
        assert!(
            x >= 1 && x <= self.n,
            "position {x} out of range 1..={}",
            self.n
        );
        let c = self.bwt.access(x);
        self.c_array[c as usize] + self.bwt.rank(c, x)
    }

    /// The symbol class owning position `x` and that class's full range:
    /// `(c, C[c]+1, C[c+1])`.
    pub fn range_containing(&self, x: u64) -> (u32, u64, u64) {
        assert!(
            x >= 1 && x <= self.n,
            "position {x} out of range 1..={}",
            self.n
        );
        let c = self.class_of(x);
        (
            c,
            self.c_array[c as usize] + 1,
            self.c_array[c as usize + 1],
        )
    }

    /// Suffix array range of suffixes prefixed by `pattern`, by backward
    /// search; `None` when the pattern does not occur.
    ///
    /// The transform is cyclic, so a pattern placing the final sequence
    /// symbol in a non-final position matches the wrapped window at the
    /// sequence end even though no linear occurrence exists. The final
    /// symbol is unique to position `n` (the terminator, or the end marker
    /// of a marked concatenation), so patterns over the remaining alphabet
    /// are counted exactly.
    pub fn count_range(&self, pattern: &[u32]) -> Option<(u64, u64)> {
        let mut sp = 1u64;
        let mut ep = self.n;
        for &c in pattern.iter().rev() {
            if c >= self.alpha {
                return None;
            }
            let base = self.c_array[c as usize];
            sp = base + self.bwt.rank(c, sp - 1) + 1;
            ep = base + self.bwt.rank(c, ep);
            if sp > ep {
                return None;
            }
        }
        Some((sp, ep))
    }

    /// Number of occurrences of the pattern; the empty pattern matches
    /// everywhere, giving `n`.
    pub fn count(&self, pattern: &[u32]) -> u64 {
        match self.count_range(pattern) {
            Some((sp, ep)) => ep - sp + 1,
            None => 0,
        }
    }

    /// [`count`](Self::count) for a byte pattern; bytes outside the regular
    /// alphabet (including terminator bytes) match nothing.
    pub fn count_bytes(&self, pattern: &[u8]) -> u64 {
        let ranks: Option<Vec<u32>> = pattern
            .iter()
            .map(|&b| self.alphabet.rank_of_byte(b))
            .collect();
        match ranks {
            Some(ranks) => self.count(&ranks),
            None => 0,
        }
    }

    /// `sa[x]`, walking `psi` forward to the nearest sampled value.
    pub fn locate(&self, x: u64) -> u64 {
        self.locate_with_steps(x).0
    }

    /// [`locate`](Self::locate) plus the number of `psi` evaluations spent;
    /// the walk needs at most `d - 1` of them.
    pub fn locate_with_steps(&self, x: u64) -> (u64, u32) {
        assert!(
            x >= 1 && x <= self.n,
            "position {x} out of range 1..={}",
            self.n
        );
        let mut x = x;
        let mut steps = 0u32;
        while !self.sa_marks.get(x) {
            x = self.psi(x);
            steps += 1;
        }
        let v = self.sa_values.get(self.sa_marks.rank1(x) as usize);
        (v - steps as u64, steps)
    }

    /// `sa^-1[i]`: the suffix array position holding text position `i`,
    /// reached from the nearest inverse sample.
    pub fn sa_inverse(&self, i: u64) -> u64 {
        self.sa_inverse_with_steps(i).0
    }

    /// [`sa_inverse`](Self::sa_inverse) plus the number of `psi` evaluations
    /// spent, at most `d - 1`.
    pub fn sa_inverse_with_steps(&self, i: u64) -> (u64, u32) {
        assert!(
            i >= 1 && i <= self.n,
            "position {i} out of range 1..={}",
            self.n
        );
        let k = (i - 1) / self.d as u64;
        let mut x = self.isa_samples.get(k as usize + 1);
        let mut steps = 0u32;
        for _ in (1 + k * self.d as u64)..i {
            x = self.psi(x);
            steps += 1;
        }
        (x, steps)
    }

    /// The symbol classes of `T[i ..= i+l-1]`. Panics unless the whole range
    /// lies in `1..=n`.
    pub fn display(&self, i: u64, l: u64) -> Vec<u32> {
        self.display_with_steps(i, l).0
    }

    /// [`display`](Self::display) plus the number of `psi` evaluations
    /// spent, at most `d + l`.
    pub fn display_with_steps(&self, i: u64, l: u64) -> (Vec<u32>, u32) {
        assert!(i >= 1, "text positions start at 1");
        assert!(
            i + l - 1 <= self.n,
            "range [{i}, {}] reaches past the sequence end {}",
            i + l - 1,
            self.n
        );
        if l == 0 {
            return (Vec::new(), 0);
        }
        let (mut x, mut steps) = self.sa_inverse_with_steps(i);
        let mut out = Vec::with_capacity(l as usize);
        for t in 0..l {
            let (c, _, _) = self.range_containing(x);
            out.push(c);
            if t + 1 < l {
                x = self.psi(x);
                steps += 1;
            }
        }
        (out, steps)
    }

    /// [`display`](Self::display) rendered through the alphabet map.
    pub fn display_bytes(&self, i: u64, l: u64) -> Vec<u8> {
        self.display(i, l)
            .iter()
            .map(|&c| self.alphabet.byte_of_rank(c))
            .collect()
    }

    /// Space accounting per section.
    pub fn size_report(&self) -> CsaSizeReport {
        CsaSizeReport {
            n: self.n,
            d: self.d,
            run_count: self.run_count() as u64,
            bwt_bits: self.bwt.size_in_bits(),
            c_array_bits: self.c_array.len() as u64 * 64,
            sa_marks_bits: self.sa_marks.size_in_bits(),
            sa_values_bits: self.sa_values.size_in_bits(),
            isa_samples_bits: self.isa_samples.size_in_bits(),
        }
    }

    /// Serializes into a checksummed container.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.seal().0
    }

    /// Digest identifying this index's exact content; auxiliary structure
    /// files embed it so a mismatched pairing fails on load.
    pub fn content_hash(&self) -> [u8; 32] {
        self.seal().1
    }

    fn seal(&self) -> (Vec<u8>, [u8; 32]) {
        let mut w = ByteWriter::new();
        w.put_u64(self.n);
        w.put_u32(self.alpha);
        w.put_u32(self.d);
        let (lo, hi) = self.alphabet.regular_range();
        w.put_u32(lo);
        w.put_u32(hi);
        w.put_byte_vec(self.alphabet.rank_bytes());
        w.put_u64_slice(&self.c_array);
        self.bwt.write(&mut w);
        self.sa_marks.write(&mut w);
        self.sa_values.write(&mut w);
        self.isa_samples.write(&mut w);
        seal_container(INDEX_MAGIC, &w.into_bytes())
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Csa> {
        let (payload, _) = open_container(INDEX_MAGIC, bytes)?;
        let mut r = ByteReader::new(payload);
        let n = r.get_u64()?;
        let alpha = r.get_u32()?;
        let d = r.get_u32()?;
        let lo = r.get_u32()?;
        let hi = r.get_u32()?;
        let map_bytes = r.get_byte_vec()?;
        if hi as usize >= map_bytes.len() || lo > hi {
            return Err(Error::MalformedData("alphabet map out of shape".into()));
        }
        let alphabet = AlphabetMap::new(map_bytes, lo, hi);
        let c_array = r.get_u64_vec()?;
        let bwt = RleBwt::read(&mut r)?;
        let sa_marks = PlainBitVector::read(&mut r)?;
        let sa_values = IntVector::read(&mut r)?;
        let isa_samples = IntVector::read(&mut r)?;
        if !r.is_at_end() {
            return Err(Error::MalformedData(
                "trailing bytes after index payload".into(),
            ));
        }
        if d == 0
            || alphabet.total_ranks() != alpha
            || c_array.len() != alpha as usize + 1
            || c_array.last() != Some(&n)
            || bwt.len() != n
            || bwt.alpha() != alpha
            || sa_marks.len() != n
            || sa_marks.count_ones() != sa_values.len() as u64
            || isa_samples.len() as u64 != n.div_ceil(d as u64).max(1)
        {
            return Err(Error::MalformedData("index sections disagree".into()));
        }
        Ok(Csa {
            n,
            alpha,
            d,
            c_array,
            bwt,
            sa_marks,
            sa_values,
            isa_samples,
            alphabet,
        })
    }
}

/// Bit counts per index section.
#[derive(Debug, Clone, Serialize)]
pub struct CsaSizeReport {
    pub n: u64,
    pub d: u32,
    pub run_count: u64,
    pub bwt_bits: u64,
    pub c_array_bits: u64,
    pub sa_marks_bits: u64,
    pub sa_values_bits: u64,
    pub isa_samples_bits: u64,
}

impl CsaSizeReport {
    pub fn total_bits(&self) -> u64 {
        self.bwt_bits
            + self.c_array_bits
            + self.sa_marks_bits
            + self.sa_values_bits
            + self.isa_samples_bits
    }

    pub fn bits_per_symbol(&self) -> f64 {
        self.total_bits() as f64 / self.n as f64
    }
}
