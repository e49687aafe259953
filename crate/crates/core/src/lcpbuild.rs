//! LCP construction driven by the compressed index alone.
//!
//! A single forward pass visits text positions `1, 2, ..., n` while tracking
//! the suffix array position `x` of the current suffix. When the previous
//! suffix in suffix array order starts with the same symbol and its `psi`
//! image is exactly `x`'s predecessor, the current value follows from the
//! previous one (it drops by one). Otherwise the value is irreducible and a
//! pair of synchronized `psi` walks computes it from scratch. The total work
//! is bounded by the number of `psi` evaluations, which is linear in
//! `n` plus the sum of the irreducible values.

use crate::bitcodec::BitVectorKind;
use crate::csa::Csa;
use crate::error::Result;
use crate::sampledlcp::{spacing_value, SampledLcp, SpacingCounter, NO_EXTRA_SAMPLES};
use serde::Serialize;

/// Receiver for the permuted LCP stream: `emit(i, value)` is called once per
/// text position `i`, in increasing order.
pub trait PlcpSink {
    fn emit(&mut self, i: u64, value: u64);
}

impl<F: FnMut(u64, u64)> PlcpSink for F {
    fn emit(&mut self, i: u64, value: u64) {
        self(i, value)
    }
}

/// Work counters from one construction pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ScanStats {
    /// Positions whose value was computed from scratch; position 1 counts.
    pub irreducible_count: u64,
    /// Sum of the values at those positions.
    pub irreducible_sum: u64,
    /// Total `psi` evaluations spent, including the adjacency tests.
    pub psi_evals: u64,
}

/// One visited position: text position `i` sits at suffix array position
/// `x` and carries `value`; `maximal` marks values computed from scratch.
#[derive(Debug, Clone, Copy)]
struct ScanRecord {
    i: u64,
    x: u64,
    value: u64,
    maximal: bool,
}

/// `lcp[b]` by synchronized `psi` walks on positions `b - 1` and `b`: both
/// walks advance while the two suffixes share their first symbol.
fn lcp_walk(csa: &Csa, b: u64, psi_evals: &mut u64) -> u64 {
    let mut a = b - 1;
    let mut b = b;
    let mut k = 0u64;
    loop {
        let (_, lo, _) = csa.range_containing(b);
        if a < lo {
            return k;
        }
        a = csa.psi(a);
        b = csa.psi(b);
        *psi_evals += 2;
        k += 1;
    }
}

fn scan(csa: &Csa, mut visit: impl FnMut(ScanRecord)) -> ScanStats {
    let n = csa.n();
    let mut stats = ScanStats {
        irreducible_count: 1,
        irreducible_sum: 0,
        psi_evals: 0,
    };
    let mut x = csa.sa_inverse(1);
    // Position 1 has no left symbol, so its value is always irreducible.
    let mut prev = lcp_walk(csa, x, &mut stats.psi_evals);
    stats.irreducible_sum += prev;
    visit(ScanRecord {
        i: 1,
        x,
        value: prev,
        maximal: true,
    });
    for i in 1..n {
        let (_, lo, _) = csa.range_containing(x);
        let y = csa.psi(x);
        stats.psi_evals += 1;
        let mut reducible = false;
        if x > lo {
            stats.psi_evals += 1;
            reducible = csa.psi(x - 1) + 1 == y;
        }
        let value = if reducible {
            prev - 1
        } else {
            let v = lcp_walk(csa, y, &mut stats.psi_evals);
            stats.irreducible_count += 1;
            stats.irreducible_sum += v;
            v
        };
        debug_assert!(
            value + 1 >= prev,
            "consecutive values may drop by at most one"
        );
        visit(ScanRecord {
            i: i + 1,
            x: y,
            value,
            maximal: !reducible,
        });
        prev = value;
        x = y;
    }
    stats
}

/// Streams `plcp[1..=n]` in text order into `sink`, deriving every value
/// from the index alone.
pub fn build_plcp_from_csa<S: PlcpSink + ?Sized>(csa: &Csa, sink: &mut S) -> ScanStats {
    scan(csa, |rec| sink.emit(rec.i, rec.value))
}

/// `lcp[b]` for a suffix array position `b >= 2`, without any stored LCP
/// data. Costs two `psi` evaluations per matched symbol.
pub fn lcp_pair_via_psi(csa: &Csa, b: u64) -> u64 {
    assert!(
        b >= 2 && b <= csa.n(),
        "position {b} out of range 2..={}",
        csa.n()
    );
    let mut scratch = 0u64;
    lcp_walk(csa, b, &mut scratch)
}

/// Per-position classification of the permuted LCP values.
///
/// Index `i - 1` describes text position `i`. A value is maximal when it was
/// computed from scratch (its left neighbour gives it no credit), minimal
/// when the next position is maximal (or `i = n`), and strictly minimal when
/// additionally the value does not exceed its successor.
#[derive(Debug, Clone)]
pub struct MinimalClassification {
    pub maximal: Vec<bool>,
    pub minimal: Vec<bool>,
    pub strictly_minimal: Vec<bool>,
    pub values: Vec<u64>,
    pub stats: ScanStats,
}

impl MinimalClassification {
    fn count_and_sum(&self, flags: &[bool]) -> (u64, u64) {
        let mut count = 0u64;
        let mut sum = 0u64;
        for (idx, &f) in flags.iter().enumerate() {
            if f {
                count += 1;
                sum += self.values[idx];
            }
        }
        (count, sum)
    }

    pub fn maximal_count(&self) -> u64 {
        self.count_and_sum(&self.maximal).0
    }

    pub fn maximal_sum(&self) -> u64 {
        self.count_and_sum(&self.maximal).1
    }

    pub fn minimal_count(&self) -> u64 {
        self.count_and_sum(&self.minimal).0
    }

    pub fn minimal_sum(&self) -> u64 {
        self.count_and_sum(&self.minimal).1
    }

    pub fn strictly_minimal_count(&self) -> u64 {
        self.count_and_sum(&self.strictly_minimal).0
    }

    pub fn strictly_minimal_sum(&self) -> u64 {
        self.count_and_sum(&self.strictly_minimal).1
    }
}

/// Classifies every text position by streaming the values once. The flag
/// for position `i` needs the maximal flag of position `i + 1`, so decisions
/// trail the scan by one record; position `n` is always strictly minimal.
pub fn classify_minimal_from_csa(csa: &Csa) -> MinimalClassification {
    let n = csa.n() as usize;
    let mut maximal = vec![false; n];
    let mut minimal = vec![false; n];
    let mut strictly_minimal = vec![false; n];
    let mut values = vec![0u64; n];
    let mut pending: Option<(usize, u64)> = None;
    let stats = scan(csa, |rec| {
        let idx = rec.i as usize - 1;
        maximal[idx] = rec.maximal;
        values[idx] = rec.value;
        if let Some((pi, pv)) = pending {
            minimal[pi] = rec.maximal;
            strictly_minimal[pi] = rec.maximal && pv <= rec.value;
        }
        pending = Some((idx, rec.value));
    });
    minimal[n - 1] = true;
    strictly_minimal[n - 1] = true;
    let out = MinimalClassification {
        maximal,
        minimal,
        strictly_minimal,
        values,
        stats,
    };
    assert_eq!(
        out.minimal_count(),
        csa.run_count() as u64,
        "one minimal position per run of the transformed sequence"
    );
    assert_eq!(
        out.minimal_sum(),
        out.stats.irreducible_sum - (csa.n() - csa.run_count() as u64),
        "minimal and maximal totals must differ by the non-maximal position count"
    );
    out
}

/// Builds the sampled LCP array from the index alone, in two streaming
/// passes: the first keeps the value at every strictly minimal position, the
/// second inserts an extra sample whenever `d_prime` consecutive positions
/// went unsampled. `None` keeps only the strictly minimal samples. Produces
/// bit-identical output to
/// [`build_sampled_lcp_fast`](crate::sampledlcp::build_sampled_lcp_fast).
pub fn build_sampled_lcp_from_csa(
    csa: &Csa,
    d_prime: Option<u64>,
    kind: BitVectorKind,
) -> Result<SampledLcp> {
    build_sampled_lcp_from_csa_with_stats(csa, d_prime, kind).map(|(s, _)| s)
}

/// Same as [`build_sampled_lcp_from_csa`], also returning the combined scan
/// statistics of both passes.
pub fn build_sampled_lcp_from_csa_with_stats(
    csa: &Csa,
    d_prime: Option<u64>,
    kind: BitVectorKind,
) -> Result<(SampledLcp, ScanStats)> {
    let d_prime = spacing_value(d_prime)?;
    let n = csa.n();
    let mut samples: Vec<(u64, u64)> = Vec::new();

    let mut pending: Option<ScanRecord> = None;
    let mut stats = scan(csa, |rec| {
        if let Some(p) = pending {
            if rec.maximal && p.value <= rec.value {
                samples.push((p.x, p.value));
            }
        }
        pending = Some(rec);
    });
    let last = pending.expect("scan visits every position");
    samples.push((last.x, last.value));
    let minimal_count = samples.len() as u64;

    let mut extras = 0u64;
    if d_prime != NO_EXTRA_SAMPLES {
        let mut counter = SpacingCounter::new(d_prime);
        let mut pending: Option<ScanRecord> = None;
        let second = scan(csa, |rec| {
            if let Some(p) = pending {
                let sampled = rec.maximal && p.value <= rec.value;
                if counter.observe(sampled) {
                    samples.push((p.x, p.value));
                    extras += 1;
                }
            }
            pending = Some(rec);
        });
        stats.psi_evals += second.psi_evals;
    }
    Ok((
        SampledLcp::assemble(n, d_prime, minimal_count, extras, samples, kind),
        stats,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csa::build_csa;
    use crate::error::Error;
    use crate::oracle::naive_reference;
    use crate::sampledlcp::build_sampled_lcp_fast;
    use crate::textstore::{
        generate_concat, generate_de_bruijn, generate_random, load_text, Indexable, Text,
    };

    fn banana() -> Text {
        load_text(b"banana", 0x00).unwrap()
    }

    fn collect_plcp(csa: &crate::csa::Csa) -> (Vec<u64>, ScanStats) {
        let mut out = vec![0u64; csa.n() as usize];
        let stats = build_plcp_from_csa(csa, &mut |i: u64, v: u64| {
            out[i as usize - 1] = v;
        });
        (out, stats)
    }

    #[test]
    fn banana_stream_and_stats() {
        let text = banana();
        let csa = build_csa(&text, 2).unwrap();
        let (plcp, stats) = collect_plcp(&csa);
        assert_eq!(plcp, vec![0, 3, 2, 1, 0, 0, 0]);
        assert_eq!(stats.irreducible_count, 5);
        assert_eq!(stats.irreducible_sum, 3);
    }

    #[test]
    fn unary_stream() {
        let text = load_text(b"aaaa", 0x00).unwrap();
        let csa = build_csa(&text, 2).unwrap();
        let (plcp, stats) = collect_plcp(&csa);
        assert_eq!(plcp, vec![3, 2, 1, 0, 0]);
        assert_eq!(stats.irreducible_count, 2);
        assert_eq!(stats.irreducible_sum, 3);
    }

    #[test]
    fn stream_matches_oracle_on_varied_texts() {
        let texts = vec![
            generate_random(2, 600, 41).unwrap(),
            generate_random(26, 600, 42).unwrap(),
            generate_de_bruijn(2, 7).unwrap(),
        ];
        for text in &texts {
            let csa = build_csa(text, 4).unwrap();
            let arrays = naive_reference(text).unwrap();
            let (plcp, stats) = collect_plcp(&csa);
            let expected: Vec<u64> = arrays.plcp.iter().map(|&v| v as u64).collect();
            assert_eq!(plcp, expected);
            assert_eq!(
                stats.irreducible_count as usize,
                arrays.irreducible_positions().len()
            );
            assert_eq!(stats.irreducible_sum as usize, arrays.irreducible_sum());
            let budget = 3 * (stats.irreducible_sum + csa.n());
            assert!(
                stats.psi_evals <= budget,
                "spent {} psi evaluations, budget {budget}",
                stats.psi_evals
            );
        }
    }

    #[test]
    fn scan_positions_follow_the_inverse_permutation() {
        let text = generate_random(4, 300, 43).unwrap();
        let csa = build_csa(&text, 4).unwrap();
        let arrays = naive_reference(&text).unwrap();
        let mut pairs: Vec<(u64, u64)> = Vec::new();
        scan(&csa, |rec| pairs.push((rec.i, rec.x)));
        assert_eq!(pairs.len(), text.len());
        for (i, x) in pairs {
            assert_eq!(x, arrays.isa[i as usize - 1] as u64);
        }
    }

    #[test]
    fn pair_lcp_examples_and_oracle_agreement() {
        let text = banana();
        let csa = build_csa(&text, 2).unwrap();
        assert_eq!(lcp_pair_via_psi(&csa, 4), 3);
        assert_eq!(lcp_pair_via_psi(&csa, 2), 0);
        assert_eq!(lcp_pair_via_psi(&csa, 7), 2);

        let text = generate_random(4, 500, 44).unwrap();
        let csa = build_csa(&text, 4).unwrap();
        let arrays = naive_reference(&text).unwrap();
        for b in 2..=text.len() as u64 {
            assert_eq!(lcp_pair_via_psi(&csa, b), arrays.lcp[b as usize - 1] as u64);
        }
    }

    #[test]
    fn banana_classification() {
        let text = banana();
        let csa = build_csa(&text, 2).unwrap();
        let c = classify_minimal_from_csa(&csa);
        let flagged = |v: &[bool]| -> Vec<usize> {
            v.iter()
                .enumerate()
                .filter(|(_, &f)| f)
                .map(|(i, _)| i + 1)
                .collect()
        };
        assert_eq!(flagged(&c.maximal), vec![1, 2, 5, 6, 7]);
        assert_eq!(flagged(&c.minimal), vec![1, 4, 5, 6, 7]);
        assert_eq!(flagged(&c.strictly_minimal), vec![1, 5, 6, 7]);
        assert_eq!(c.values, vec![0, 3, 2, 1, 0, 0, 0]);
        assert_eq!(c.minimal_sum(), 1);
        assert_eq!(c.maximal_sum(), 3);
    }

    #[test]
    fn classification_flags_match_oracle() {
        for (sigma, seed) in [(2u32, 45u64), (4, 46), (26, 47)] {
            let text = generate_random(sigma, 400, seed).unwrap();
            let csa = build_csa(&text, 4).unwrap();
            let arrays = naive_reference(&text).unwrap();
            let c = classify_minimal_from_csa(&csa);
            let maximal: Vec<usize> = c
                .maximal
                .iter()
                .enumerate()
                .filter(|(_, &f)| f)
                .map(|(i, _)| i + 1)
                .collect();
            assert_eq!(maximal, arrays.irreducible_positions());
            for i in 1..=text.len() {
                let expect_min = i == text.len() || c.maximal[i];
                assert_eq!(c.minimal[i - 1], expect_min);
            }
        }
    }

    #[test]
    fn repeated_copies_have_exactly_periodic_irreducible_sums() {
        let base = banana();
        let period = base.len() as u64;
        let mut sums = Vec::new();
        for copies in [2usize, 3, 4, 6] {
            let concat = generate_concat(&base, copies).unwrap();
            let csa = build_csa(&concat, 4).unwrap();
            let (_, stats) = collect_plcp(&csa);
            sums.push(stats.irreducible_sum);
        }
        assert_eq!(sums[0], 10);
        assert_eq!(sums[1], 17);
        // Each additional copy adds exactly one period to the total.
        assert_eq!(sums[1] - sums[0], period);
        assert_eq!(sums[2] - sums[1], period);
        assert_eq!(sums[3] - sums[2], 2 * period);

        let base = generate_random(4, 200, 48).unwrap();
        let period = base.len() as u64;
        let small = build_csa(&generate_concat(&base, 2).unwrap(), 4).unwrap();
        let large = build_csa(&generate_concat(&base, 5).unwrap(), 4).unwrap();
        let (_, s2) = collect_plcp(&small);
        let (_, s5) = collect_plcp(&large);
        assert_eq!(s5.irreducible_sum - s2.irreducible_sum, 3 * period);
    }

    #[test]
    fn irreducible_sum_respects_global_bound() {
        let texts = vec![
            generate_random(2, 1000, 49).unwrap(),
            generate_de_bruijn(2, 8).unwrap(),
        ];
        for text in &texts {
            let csa = build_csa(text, 4).unwrap();
            let (_, stats) = collect_plcp(&csa);
            let n = csa.n() as f64;
            let bound = 2.0 * n * n.log2();
            assert!((stats.irreducible_sum as f64) <= bound);
        }
    }

    fn assert_paths_agree(text: &impl Indexable) {
        let csa = build_csa(text, 4).unwrap();
        let hash = csa.content_hash();
        for d_prime in [None, Some(1u64), Some(4), Some(32)] {
            let from_index = build_sampled_lcp_from_csa(&csa, d_prime, BitVectorKind::Gap).unwrap();
            let fast = build_sampled_lcp_fast(text, d_prime, BitVectorKind::Gap).unwrap();
            assert_eq!(from_index, fast);
            assert_eq!(from_index.to_bytes(&hash), fast.to_bytes(&hash));
        }
    }

    #[test]
    fn sampled_construction_matches_fast_path_bit_for_bit() {
        assert_paths_agree(&banana());
        assert_paths_agree(&generate_random(2, 700, 50).unwrap());
        assert_paths_agree(&generate_random(26, 700, 51).unwrap());
        assert_paths_agree(&generate_de_bruijn(2, 7).unwrap());
        assert_paths_agree(&generate_concat(&generate_random(4, 150, 53).unwrap(), 4).unwrap());
    }

    #[test]
    fn banana_sampled_from_index() {
        let text = banana();
        let csa = build_csa(&text, 2).unwrap();
        let slcp = build_sampled_lcp_from_csa(&csa, None, BitVectorKind::Gap).unwrap();
        assert_eq!(slcp.minimal_samples(), 4);
        assert_eq!(slcp.extra_samples(), 0);
        for x in [1u64, 2, 5, 6] {
            assert!(slcp.is_sampled(x));
        }
        for x in [3u64, 4, 7] {
            assert!(!slcp.is_sampled(x));
        }
        assert_eq!(slcp.max_walk_length(&csa), 3);
    }

    #[test]
    fn sampled_access_on_repetitive_text() {
        let base = generate_random(4, 400, 52).unwrap();
        let concat = generate_concat(&base, 8).unwrap();
        let csa = build_csa(&concat, 8).unwrap();
        let arrays = naive_reference(&concat).unwrap();
        let slcp = build_sampled_lcp_from_csa(&csa, Some(64), BitVectorKind::Gap).unwrap();
        for x in 1..=concat.len() as u64 {
            let (v, k) = slcp.access_with_steps(&csa, x);
            assert_eq!(v, arrays.lcp[x as usize - 1] as u64);
            assert!(k < 64);
        }
    }

    #[test]
    fn rejects_zero_spacing() {
        let text = banana();
        let csa = build_csa(&text, 2).unwrap();
        assert!(matches!(
            build_sampled_lcp_from_csa(&csa, Some(0), BitVectorKind::Gap),
            Err(Error::InvalidParameter(_))
        ));
    }
}
