//! Run-length encoded Burrows-Wheeler transform with per-symbol rank and
//! select.

use crate::bitcodec::{DeltaStream, DeltaStreamBuilder};
use crate::error::{Error, Result};
use crate::serialize::{ByteReader, ByteWriter};

/// The transformed sequence stored as maximal equal-symbol runs.
///
/// Two global streams hold, per run, its symbol (shifted by one) and its
/// length; per-symbol streams hold the start positions (gap coded) and
/// lengths of that symbol's runs. Every query binary-searches one stream
/// directory and decodes at most one directory block, so `access`, `rank`
/// and `select` all cost O(log R + block).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RleBwt {
    n: u64,
    alpha: u32,
    run_symbols: DeltaStream,
    run_lens: DeltaStream,
    sym_start_gaps: Vec<DeltaStream>,
    sym_lens: Vec<DeltaStream>,
}

impl RleBwt {
    /// Encodes a sequence of symbol ranks in `0..alpha`.
    pub fn from_symbols(symbols: impl IntoIterator<Item = u32>, alpha: u32) -> Self {
        let mut run_symbols = DeltaStreamBuilder::new();
        let mut run_lens = DeltaStreamBuilder::new();
        let mut sym_start_gaps: Vec<DeltaStreamBuilder> =
            (0..alpha).map(|_| DeltaStreamBuilder::new()).collect();
        let mut sym_lens: Vec<DeltaStreamBuilder> =
            (0..alpha).map(|_| DeltaStreamBuilder::new()).collect();
        let mut sym_last_start = vec![0u64; alpha as usize];

        let mut current: Option<(u32, u64, u64)> = None; // symbol, start, len
        let mut n = 0u64;
        let mut flush = |(c, start, len): (u32, u64, u64)| {
            assert!(c < alpha, "symbol {c} out of alphabet 0..{alpha}");
            run_symbols.push(c as u64 + 1);
            run_lens.push(len);
            let ci = c as usize;
            sym_start_gaps[ci].push(start - sym_last_start[ci]);
            sym_last_start[ci] = start;
            sym_lens[ci].push(len);
        };
        for c in symbols {
            n += 1;
            current = match current {
                Some((pc, start, len)) if pc == c => Some((pc, start, len + 1)),
                Some(run) => {
                    flush(run);
                    Some((c, n, 1))
                }
                None => Some((c, n, 1)),
            };
        }
        if let Some(run) = current {
            flush(run);
        }
        RleBwt {
            n,
            alpha,
            run_symbols: run_symbols.finish(),
            run_lens: run_lens.finish(),
            sym_start_gaps: sym_start_gaps.into_iter().map(|b| b.finish()).collect(),
            sym_lens: sym_lens.into_iter().map(|b| b.finish()).collect(),
        }
    }

    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// Number of equal-symbol runs.
    pub fn run_count(&self) -> usize {
        self.run_lens.len()
    }

    /// Total occurrences of symbol `c`.
    pub fn symbol_count(&self, c: u32) -> u64 {
        self.sym_lens[c as usize].total()
    }

    /// The symbol at 1-based position `x`.
    pub fn access(&self, x: u64) -> u32 {
        assert!(
            x >= 1 && x <= self.n,
            "position {x} out of range 1..={}",
            self.n
        );
        let run = self.run_lens.find_by_prefix(x).unwrap();
        (self.run_symbols.get(run) - 1) as u32
    }

    /// Occurrences of `c` in positions `1..=pos`; `pos` may be 0.
    pub fn rank(&self, c: u32, pos: u64) -> u64 {
        assert!(
            pos <= self.n,
            "rank position {pos} out of range 0..={}",
            self.n
        );
        let starts = &self.sym_start_gaps[c as usize];
        if pos == 0 || starts.is_empty() {
            return 0;
        }
        // Runs of c starting at or before pos.
        let k = match starts.find_by_prefix(pos + 1) {
            Some(t) => t - 1,
            None => starts.len(),
        };
        if k == 0 {
            return 0;
        }
        let lens = &self.sym_lens[c as usize];
        let start_k = starts.prefix_sum(k);
        lens.prefix_sum(k - 1) + lens.get(k).min(pos - start_k + 1)
    }

    /// Position of the j-th occurrence of `c`, `1 <= j <= symbol_count(c)`.
    pub fn select(&self, c: u32, j: u64) -> u64 {
        let lens = &self.sym_lens[c as usize];
        assert!(
            j >= 1 && j <= lens.total(),
            "select argument {j} out of range 1..={} for symbol {c}",
            lens.total()
        );
        let t = lens.find_by_prefix(j).unwrap();
        let within = j - lens.prefix_sum(t - 1);
        self.sym_start_gaps[c as usize].prefix_sum(t) + within - 1
    }

    /// Decodes the whole transform.
    pub fn decode(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n as usize);
        for (sym, len) in self.run_symbols.iter().zip(self.run_lens.iter()) {
            out.extend(std::iter::repeat_n((sym - 1) as u32, len as usize));
        }
        out
    }

    pub fn size_in_bits(&self) -> u64 {
        self.run_symbols.size_in_bits()
            + self.run_lens.size_in_bits()
            + self
                .sym_start_gaps
                .iter()
                .map(|s| s.size_in_bits())
                .sum::<u64>()
            + self.sym_lens.iter().map(|s| s.size_in_bits()).sum::<u64>()
    }

    pub fn write(&self, w: &mut ByteWriter) {
        w.put_u64(self.n);
        w.put_u32(self.alpha);
        self.run_symbols.write(w);
        self.run_lens.write(w);
        for s in &self.sym_start_gaps {
            s.write(w);
        }
        for s in &self.sym_lens {
            s.write(w);
        }
    }

    pub fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        let n = r.get_u64()?;
        let alpha = r.get_u32()?;
        if alpha == 0 || alpha > 1 << 20 {
            return Err(Error::MalformedData(format!(
                "unreasonable alphabet size {alpha}"
            )));
        }
        let run_symbols = DeltaStream::read(r)?;
        let run_lens = DeltaStream::read(r)?;
        let sym_start_gaps: Vec<DeltaStream> = (0..alpha)
            .map(|_| DeltaStream::read(r))
            .collect::<Result<_>>()?;
        let sym_lens: Vec<DeltaStream> = (0..alpha)
            .map(|_| DeltaStream::read(r))
            .collect::<Result<_>>()?;
        if run_symbols.len() != run_lens.len() || run_lens.total() != n {
            return Err(Error::MalformedData("bwt run sections disagree".into()));
        }
        if sym_lens.iter().map(|s| s.total()).sum::<u64>() != n {
            return Err(Error::MalformedData(
                "bwt per-symbol sections disagree".into(),
            ));
        }
        Ok(RleBwt {
            n,
            alpha,
            run_symbols,
            run_lens,
            sym_start_gaps,
            sym_lens,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn check_against_naive(symbols: &[u32], alpha: u32) {
        let bwt = RleBwt::from_symbols(symbols.iter().copied(), alpha);
        assert_eq!(bwt.len(), symbols.len() as u64);
        assert_eq!(bwt.decode(), symbols);
        let naive_runs = 1 + symbols
            .windows(2)
            .filter(|w| w[0] != w[1])
            .count()
            .min(symbols.len());
        if !symbols.is_empty() {
            assert_eq!(bwt.run_count(), naive_runs);
        }
        for c in 0..alpha {
            let mut rank = 0u64;
            let mut j = 0u64;
            assert_eq!(bwt.rank(c, 0), 0);
            for (i, &s) in symbols.iter().enumerate() {
                if s == c {
                    rank += 1;
                    j += 1;
                    assert_eq!(bwt.select(c, j), i as u64 + 1, "select_{c}({j})");
                }
                assert_eq!(bwt.rank(c, i as u64 + 1), rank, "rank_{c}({})", i + 1);
            }
            assert_eq!(bwt.symbol_count(c), rank);
        }
        for (i, &s) in symbols.iter().enumerate() {
            assert_eq!(bwt.access(i as u64 + 1), s);
        }
    }

    #[test]
    fn banana_transform() {
        // "annb$aa" with $=0 a=1 b=2 n=3.
        let symbols = [1u32, 3, 3, 2, 0, 1, 1];
        check_against_naive(&symbols, 4);
        let bwt = RleBwt::from_symbols(symbols.iter().copied(), 4);
        assert_eq!(bwt.run_count(), 5);
        assert_eq!(bwt.select(1, 2), 6);
        assert_eq!(bwt.rank(3, 4), 2);
    }

    #[test]
    fn random_sequences_match_naive() {
        let mut rng = StdRng::seed_from_u64(61);
        for _ in 0..15 {
            let alpha = rng.random_range(2..8u32);
            let n = rng.random_range(1..400usize);
            let runny = rng.random_bool(0.5);
            let mut symbols = Vec::with_capacity(n);
            while symbols.len() < n {
                let c = rng.random_range(0..alpha);
                let reps = if runny { rng.random_range(1..20) } else { 1 };
                for _ in 0..reps.min(n - symbols.len()) {
                    symbols.push(c);
                }
            }
            check_against_naive(&symbols, alpha);
        }
    }

    #[test]
    fn degenerate_sequences() {
        check_against_naive(&[0], 1);
        check_against_naive(&vec![3; 1000], 4);
        let alternating: Vec<u32> = (0..500).map(|i| i % 2).collect();
        check_against_naive(&alternating, 2);
    }

    #[test]
    fn missing_symbols_have_empty_structures() {
        let bwt = RleBwt::from_symbols([2u32, 2, 2], 5);
        assert_eq!(bwt.symbol_count(0), 0);
        assert_eq!(bwt.rank(0, 3), 0);
        assert_eq!(bwt.rank(4, 3), 0);
        assert_eq!(bwt.symbol_count(2), 3);
    }

    #[test]
    fn size_tracks_run_count_not_length() {
        let mut symbols = Vec::new();
        for i in 0..50u32 {
            symbols.extend(std::iter::repeat_n(i % 3, 2000));
        }
        let bwt = RleBwt::from_symbols(symbols.iter().copied(), 3);
        assert_eq!(bwt.run_count(), 50);
        assert!(
            bwt.size_in_bits() < 50 * 400,
            "rle bwt of 50 runs should be a few kilobits, got {}",
            bwt.size_in_bits()
        );
        check_against_naive(&symbols, 3);
    }

    #[test]
    fn serialization_round_trips() {
        let symbols = [1u32, 3, 3, 2, 0, 1, 1];
        let bwt = RleBwt::from_symbols(symbols.iter().copied(), 4);
        let mut w = ByteWriter::new();
        bwt.write(&mut w);
        let bytes = w.into_bytes();
        let mut r = ByteReader::new(&bytes);
        assert_eq!(RleBwt::read(&mut r).unwrap(), bwt);
        assert!(r.is_at_end());
    }
}
