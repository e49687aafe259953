//! Brute-force reference implementations for differential testing.
//!
//! Everything here favors being obviously correct over being fast: suffixes
//! are sorted by direct slice comparison, LCP values by direct character
//! comparison, and reducibility straight from its definition. The rest of the
//! crate is tested against these references.

use crate::error::{Error, Result};
use crate::textstore::Indexable;

/// Default size cap for the brute-force suffix sort.
///
/// Adjacent-LCP computation is quadratic on degenerate (e.g. unary) inputs;
/// keep such inputs well below the cap.
pub const DEFAULT_ORACLE_LIMIT: usize = 1_000_000;

/// Reference arrays for one sequence, all 1-based values stored 0-based:
/// `sa[x - 1]` is the start position of the x-th smallest suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefArrays {
    pub sa: Vec<usize>,
    pub isa: Vec<usize>,
    /// `lcp[x - 1]` = longest common prefix of the suffixes at suffix array
    /// positions `x - 1` and `x`; `lcp[0]` = 0.
    pub lcp: Vec<usize>,
    /// `plcp[i - 1]` = `lcp[isa[i]]` in text order.
    pub plcp: Vec<usize>,
    /// `bwt[x - 1]` = symbol preceding suffix `sa[x]` (the final symbol when
    /// `sa[x]` = 1).
    pub bwt: Vec<u32>,
    /// `irreducible[i - 1]`: true unless position `i` and its left match `j`
    /// both have a predecessor and the predecessors are equal.
    pub irreducible: Vec<bool>,
}

impl RefArrays {
    pub fn n(&self) -> usize {
        self.sa.len()
    }

    /// Number of runs of equal symbols in the reference BWT.
    pub fn bwt_run_count(&self) -> usize {
        1 + self.bwt.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn irreducible_positions(&self) -> Vec<usize> {
        (1..=self.n())
            .filter(|&i| self.irreducible[i - 1])
            .collect()
    }

    pub fn irreducible_sum(&self) -> usize {
        (1..=self.n())
            .filter(|&i| self.irreducible[i - 1])
            .map(|i| self.plcp[i - 1])
            .sum()
    }
}

/// Longest common prefix of the suffixes starting at 1-based positions `i`
/// and `j`, by direct comparison.
pub fn naive_lcp_pair(text: &impl Indexable, i: usize, j: usize) -> usize {
    let s = text.symbols();
    let n = s.len();
    assert!(
        i >= 1 && i <= n && j >= 1 && j <= n,
        "positions out of range"
    );
    let (mut a, mut b) = (i - 1, j - 1);
    let mut k = 0;
    while a < n && b < n && s[a] == s[b] {
        a += 1;
        b += 1;
        k += 1;
    }
    k
}

/// Computes every reference array by brute force.
pub fn naive_reference(text: &impl Indexable) -> Result<RefArrays> {
    naive_reference_with_limit(text, DEFAULT_ORACLE_LIMIT)
}

pub fn naive_reference_with_limit(text: &impl Indexable, limit: usize) -> Result<RefArrays> {
    let s = text.symbols();
    let n = s.len();
    if n > limit {
        return Err(Error::OracleLimit { n, limit });
    }

    let mut sa: Vec<usize> = (1..=n).collect();
    sa.sort_by(|&i, &j| s[i - 1..].cmp(&s[j - 1..]));

    let mut isa = vec![0usize; n];
    for (x0, &i) in sa.iter().enumerate() {
        isa[i - 1] = x0 + 1;
    }

    let mut lcp = vec![0usize; n];
    for x0 in 1..n {
        lcp[x0] = naive_lcp_pair(text, sa[x0 - 1], sa[x0]);
    }

    let mut plcp = vec![0usize; n];
    for x0 in 0..n {
        plcp[sa[x0] - 1] = lcp[x0];
    }

    let bwt: Vec<u32> = sa
        .iter()
        .map(|&i| if i == 1 { s[n - 1] } else { s[i - 2] })
        .collect();

    let mut irreducible = vec![false; n];
    for i in 1..=n {
        let x = isa[i - 1];
        let reducible = i > 1 && x > 1 && {
            let j = sa[x - 2];
            j > 1 && s[i - 2] == s[j - 2]
        };
        irreducible[i - 1] = !reducible;
    }

    Ok(RefArrays {
        sa,
        isa,
        lcp,
        plcp,
        bwt,
        irreducible,
    })
}

/// Reference arrays over the comparison view of a copy concatenation.
pub fn oracle_concat_reference(concat: &crate::textstore::SentinelConcat) -> Result<RefArrays> {
    naive_reference(concat)
}

/// Brute-force occurrence count of `pattern` (as symbol ranks) in the
/// sequence, terminator position included in windows but never matching
/// regular patterns.
pub fn naive_count(text: &impl Indexable, pattern: &[u32]) -> usize {
    let s = text.symbols();
    if pattern.is_empty() {
        return s.len();
    }
    if pattern.len() > s.len() {
        return 0;
    }
    s.windows(pattern.len()).filter(|w| *w == pattern).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textstore::{generate_concat, load_text};

    #[test]
    fn banana_reference_arrays() {
        let t = load_text(b"banana", 0).unwrap();
        let r = naive_reference(&t).unwrap();
        assert_eq!(r.sa, vec![7, 6, 4, 2, 1, 5, 3]);
        assert_eq!(r.isa, vec![5, 4, 7, 3, 6, 2, 1]);
        assert_eq!(r.lcp, vec![0, 0, 1, 3, 0, 0, 2]);
        assert_eq!(r.plcp, vec![0, 3, 2, 1, 0, 0, 0]);
        // annb$aa with ranks $=0 a=1 b=2 n=3.
        assert_eq!(r.bwt, vec![1, 3, 3, 2, 0, 1, 1]);
        assert_eq!(r.bwt_run_count(), 5);
        assert_eq!(r.irreducible_positions(), vec![1, 2, 5, 6, 7]);
        assert_eq!(r.irreducible_sum(), 3);
    }

    #[test]
    fn unary_reference_arrays() {
        let t = load_text(b"aaaa", 0).unwrap();
        let r = naive_reference(&t).unwrap();
        assert_eq!(r.sa, vec![5, 4, 3, 2, 1]);
        assert_eq!(r.plcp, vec![3, 2, 1, 0, 0]);
        assert_eq!(r.bwt_run_count(), 2);
        assert_eq!(r.irreducible_positions(), vec![1, 5]);
    }

    #[test]
    fn lcp_pair_edges() {
        let t = load_text(b"banana", 0).unwrap();
        // A suffix matched against itself runs to the end of the sequence.
        assert_eq!(naive_lcp_pair(&t, 2, 2), 6);
        assert_eq!(naive_lcp_pair(&t, 2, 4), 3);
        assert_eq!(naive_lcp_pair(&t, 1, 7), 0);
    }

    #[test]
    fn first_position_always_irreducible() {
        for input in [b"banana".as_slice(), b"mississippi", b"abcabc", b"zzzy"] {
            let t = load_text(input, 0).unwrap();
            let r = naive_reference(&t).unwrap();
            assert!(r.irreducible[0]);
        }
    }

    #[test]
    fn concat_reference_matches_copy_structure() {
        let base = load_text(b"banana", 0).unwrap();

        let c2 = generate_concat(&base, 2).unwrap();
        let r2 = oracle_concat_reference(&c2).unwrap();
        // Copy 1 mirrors the base PLCP; copy 2 is one long reducible chain.
        assert_eq!(&r2.plcp[..7], &[0, 3, 2, 1, 0, 0, 0]);
        assert_eq!(&r2.plcp[7..14], &[7, 6, 5, 4, 3, 2, 1]);
        assert_eq!(r2.irreducible_sum(), 3 + 7);
        // Every position of copy 2 past its first is reducible.
        assert!((9..=14).all(|i| !r2.irreducible[i - 1]));

        let r3 = oracle_concat_reference(&generate_concat(&base, 3).unwrap()).unwrap();
        assert_eq!(r3.irreducible_sum(), 3 + 2 * 7);
    }

    #[test]
    fn oracle_limit_is_enforced() {
        let t = load_text(b"abc", 0).unwrap();
        assert!(matches!(
            naive_reference_with_limit(&t, 2),
            Err(Error::OracleLimit { n: 4, limit: 2 })
        ));
    }

    #[test]
    fn naive_count_windows() {
        let t = load_text(b"banana", 0).unwrap();
        // ranks: a=1 b=2 n=3
        assert_eq!(naive_count(&t, &[1, 3, 1]), 2);
        assert_eq!(naive_count(&t, &[2]), 1);
        assert_eq!(naive_count(&t, &[3, 2]), 0);
        assert_eq!(naive_count(&t, &[]), 7);
    }
}
