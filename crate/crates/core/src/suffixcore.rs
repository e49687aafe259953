//! Array-form suffix structures: linear-time suffix array construction,
//! inverse permutations, and text-order longest-common-prefix arrays.
//!
//! These in-memory arrays serve as construction scaffolding and as the fast
//! path for experiments at scales where the compressed structures would be
//! too slow to build through their own query interfaces. All returned
//! arrays hold 1-based positions/ranks; slot `v[i]` describes text position
//! or rank `i + 1`.

/// Suffix array by induced sorting (SA-IS).
///
/// Accepts any non-empty symbol sequence. A fresh minimal sentinel is
/// appended internally, so repeated minima inside `symbols` (marker symbols
/// in concatenated sequences) are handled by ordinary suffix comparison.
pub fn suffix_array(symbols: &[u32]) -> Vec<u32> {
    assert!(
        !symbols.is_empty(),
        "cannot build a suffix array of an empty sequence"
    );
    assert!(
        symbols.len() < (u32::MAX - 2) as usize,
        "sequence too long for 32-bit positions"
    );
    let mut s: Vec<u32> = Vec::with_capacity(symbols.len() + 1);
    for &c in symbols {
        s.push(c + 1);
    }
    s.push(0);
    let alpha = (*s.iter().max().unwrap() + 1) as usize;
    let sa = sa_is(&s, alpha);
    debug_assert_eq!(sa[0] as usize, symbols.len());
    sa[1..].iter().map(|&i| i + 1).collect()
}

/// Inverse of a 1-based permutation: `out[p[x - 1] - 1] == x`.
pub fn inverse_permutation(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; p.len()];
    for (x0, &pos) in p.iter().enumerate() {
        inv[(pos - 1) as usize] = x0 as u32 + 1;
    }
    inv
}

/// Text-order LCP values from the suffix array in linear time: `plcp[i - 1]`
/// is the longest common prefix of the suffix at position `i` and its
/// lexicographic predecessor suffix (0 for the smallest suffix).
pub fn plcp_from_sa(symbols: &[u32], sa: &[u32], isa: &[u32]) -> Vec<u32> {
    let n = symbols.len();
    let mut plcp = vec![0u32; n];
    let mut l = 0usize;
    for i in 0..n {
        let x = isa[i] as usize;
        if x == 1 {
            l = 0;
            continue;
        }
        let j = (sa[x - 2] - 1) as usize;
        while i + l < n && j + l < n && symbols[i + l] == symbols[j + l] {
            l += 1;
        }
        plcp[i] = l as u32;
        l = l.saturating_sub(1);
    }
    plcp
}

/// Text-order LCP values computed from left matches, comparing symbols only
/// at positions whose value is not forced by the preceding one.
///
/// A position `i > 1` whose left match `j` (the suffix preceding suffix `i`
/// in lexicographic order, `j = sa[isa[i] - 2]`) also has `j > 1` and
/// `symbols[i - 2] == symbols[j - 2]` takes the value `plcp[i - 2] - 1`
/// without any comparison. Every other value is measured directly. Returns
/// the array and the total number of symbol comparisons spent, which is
/// bounded by the sum of the directly measured values plus one mismatch or
/// end-of-sequence probe each.
pub fn irreducible_plcp(symbols: &[u32], sa: &[u32], isa: &[u32]) -> (Vec<u32>, u64) {
    let n = symbols.len();
    let mut plcp = vec![0u32; n];
    let mut comparisons = 0u64;
    for i in 1..=n {
        let x = isa[i - 1] as usize;
        if x == 1 {
            plcp[i - 1] = 0;
            continue;
        }
        let j = sa[x - 2] as usize;
        if i > 1 && j > 1 && symbols[i - 2] == symbols[j - 2] {
            plcp[i - 1] = plcp[i - 2] - 1;
            continue;
        }
        let mut l = 0usize;
        while i + l <= n && j + l <= n {
            comparisons += 1;
            if symbols[i + l - 1] != symbols[j + l - 1] {
                break;
            }
            l += 1;
        }
        plcp[i - 1] = l as u32;
    }
    (plcp, comparisons)
}

const EMPTY: u32 = u32::MAX;

/// Core induced-sorting recursion; expects the last symbol of `s` to be the
/// unique minimum. Returns 0-based suffix start positions.
fn sa_is(s: &[u32], alpha: usize) -> Vec<u32> {
    let n = s.len();
    if n == 1 {
        return vec![0];
    }
    if n == 2 {
        return if s[0] < s[1] { vec![0, 1] } else { vec![1, 0] };
    }

    // S-type suffixes are smaller than the suffix one position left of them.
    let mut t = vec![false; n];
    t[n - 1] = true;
    for i in (0..n - 1).rev() {
        t[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && t[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && t[i] && !t[i - 1];

    let mut bkt = vec![0u32; alpha];
    for &c in s {
        bkt[c as usize] += 1;
    }
    let bucket_tails = |bkt: &[u32]| {
        let mut tails = vec![0u32; alpha];
        let mut sum = 0;
        for c in 0..alpha {
            sum += bkt[c];
            tails[c] = sum;
        }
        tails
    };

    // Round 1: drop LMS suffixes at their bucket tails in text order, then
    // induce; afterwards the LMS substrings appear in sorted order.
    let mut sa = vec![EMPTY; n];
    {
        let mut tails = bucket_tails(&bkt);
        for (i, &sym) in s.iter().enumerate().skip(1) {
            if is_lms(i) {
                let c = sym as usize;
                tails[c] -= 1;
                sa[tails[c] as usize] = i as u32;
            }
        }
    }
    induce(&mut sa, s, &t, &bkt);

    let lms_in_text_order: Vec<u32> = (1..n).filter(|&i| is_lms(i)).map(|i| i as u32).collect();
    let n_lms = lms_in_text_order.len();
    let mut lms_sorted: Vec<u32> = sa.iter().copied().filter(|&v| is_lms(v as usize)).collect();
    debug_assert_eq!(lms_sorted.len(), n_lms);

    // Name the LMS substrings in sorted order; equal substrings share a name.
    let mut name_of = vec![EMPTY; n];
    let mut names = 0u32;
    name_of[lms_sorted[0] as usize] = 0;
    for w in lms_sorted.windows(2) {
        if !lms_substrings_equal(s, &t, w[0] as usize, w[1] as usize) {
            names += 1;
        }
        name_of[w[1] as usize] = names;
    }
    names += 1;

    if (names as usize) < n_lms {
        let s1: Vec<u32> = lms_in_text_order
            .iter()
            .map(|&p| name_of[p as usize])
            .collect();
        let sa1 = sa_is(&s1, names as usize);
        lms_sorted = sa1.iter().map(|&r| lms_in_text_order[r as usize]).collect();
    }

    // Round 2: place the now fully sorted LMS suffixes and induce the rest.
    sa.fill(EMPTY);
    {
        let mut tails = bucket_tails(&bkt);
        for &p in lms_sorted.iter().rev() {
            let c = s[p as usize] as usize;
            tails[c] -= 1;
            sa[tails[c] as usize] = p;
        }
    }
    induce(&mut sa, s, &t, &bkt);
    sa
}

/// One L-pass (left to right from bucket heads) followed by one S-pass
/// (right to left from bucket tails).
fn induce(sa: &mut [u32], s: &[u32], t: &[bool], bkt: &[u32]) {
    let n = s.len();
    let alpha = bkt.len();
    let mut heads = vec![0u32; alpha];
    {
        let mut sum = 0;
        for c in 0..alpha {
            heads[c] = sum;
            sum += bkt[c];
        }
    }
    for i in 0..n {
        let v = sa[i];
        if v != EMPTY && v > 0 {
            let j = (v - 1) as usize;
            if !t[j] {
                let c = s[j] as usize;
                sa[heads[c] as usize] = j as u32;
                heads[c] += 1;
            }
        }
    }
    let mut tails = vec![0u32; alpha];
    {
        let mut sum = 0;
        for c in 0..alpha {
            sum += bkt[c];
            tails[c] = sum;
        }
    }
    for i in (0..n).rev() {
        let v = sa[i];
        if v != EMPTY && v > 0 {
            let j = (v - 1) as usize;
            if t[j] {
                let c = s[j] as usize;
                tails[c] -= 1;
                sa[tails[c] as usize] = j as u32;
            }
        }
    }
}

/// Whether the LMS substrings starting at `i` and `j` match in both symbols
/// and type flags up to and including their closing LMS positions.
fn lms_substrings_equal(s: &[u32], t: &[bool], i: usize, j: usize) -> bool {
    if i == j {
        return true;
    }
    let is_lms = |p: usize| p > 0 && t[p] && !t[p - 1];
    let mut k = 0usize;
    loop {
        if s[i + k] != s[j + k] {
            return false;
        }
        let end_i = k > 0 && is_lms(i + k);
        let end_j = k > 0 && is_lms(j + k);
        if end_i || end_j {
            return end_i && end_j;
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_reference;
    use crate::textstore::{generate_concat, generate_de_bruijn, generate_random};
    use crate::Indexable;

    fn naive_sa(symbols: &[u32]) -> Vec<u32> {
        let mut sa: Vec<u32> = (1..=symbols.len() as u32).collect();
        sa.sort_by(|&a, &b| symbols[(a - 1) as usize..].cmp(&symbols[(b - 1) as usize..]));
        sa
    }

    #[test]
    fn exhaustive_binary_and_ternary_strings() {
        // Every sequence over {1,2} up to length 10 and {1,2,3} up to
        // length 6, each with a trailing 0 terminator.
        for sigma in [2u32, 3] {
            let max_len = if sigma == 2 { 10 } else { 6 };
            for len in 0..=max_len {
                let count = (sigma as u64).pow(len);
                for code in 0..count {
                    let mut symbols = Vec::with_capacity(len as usize + 1);
                    let mut c = code;
                    for _ in 0..len {
                        symbols.push((c % sigma as u64) as u32 + 1);
                        c /= sigma as u64;
                    }
                    symbols.push(0);
                    assert_eq!(suffix_array(&symbols), naive_sa(&symbols), "{symbols:?}");
                }
            }
        }
    }

    #[test]
    fn repeated_minima_inside_the_sequence() {
        // Marker-style layouts where rank 0 appears several times.
        let cases: Vec<Vec<u32>> = vec![
            vec![0, 0, 0, 1],
            vec![1, 0, 1, 0, 2],
            vec![2, 1, 0, 2, 1, 0, 3],
            vec![1, 1, 0, 1, 1, 0, 1, 1, 0, 2],
        ];
        for symbols in cases {
            assert_eq!(suffix_array(&symbols), naive_sa(&symbols), "{symbols:?}");
        }
    }

    #[test]
    fn agrees_with_reference_on_generated_texts() {
        for (sigma, n, seed) in [(2u32, 2000usize, 1u64), (4, 2000, 2), (26, 2000, 3)] {
            let text = generate_random(sigma, n, seed).unwrap();
            let arrays = naive_reference(&text).unwrap();
            let sa = suffix_array(text.symbols());
            assert_eq!(
                sa.iter().map(|&v| v as usize).collect::<Vec<_>>(),
                arrays.sa,
                "sigma {sigma} seed {seed}"
            );
            let isa = inverse_permutation(&sa);
            assert_eq!(
                isa.iter().map(|&v| v as usize).collect::<Vec<_>>(),
                arrays.isa
            );
            let plcp = plcp_from_sa(text.symbols(), &sa, &isa);
            assert_eq!(
                plcp.iter().map(|&v| v as usize).collect::<Vec<_>>(),
                arrays.plcp
            );
        }
    }

    #[test]
    fn agrees_with_reference_on_repetitive_inputs() {
        let db = generate_de_bruijn(2, 6).unwrap();
        let arrays = naive_reference(&db).unwrap();
        let sa = suffix_array(db.symbols());
        assert_eq!(
            sa.iter().map(|&v| v as usize).collect::<Vec<_>>(),
            arrays.sa
        );

        let base = generate_random(4, 500, 11).unwrap();
        let concat = generate_concat(&base, 3).unwrap();
        let arrays = naive_reference(&concat).unwrap();
        let sa = suffix_array(concat.symbols());
        assert_eq!(
            sa.iter().map(|&v| v as usize).collect::<Vec<_>>(),
            arrays.sa
        );
    }

    #[test]
    fn left_match_recurrence_yields_reference_lcp_values() {
        let texts = vec![
            generate_random(2, 1500, 5).unwrap(),
            generate_random(26, 1500, 6).unwrap(),
            generate_de_bruijn(2, 8).unwrap(),
        ];
        for text in &texts {
            let arrays = naive_reference(text).unwrap();
            let sa = suffix_array(text.symbols());
            let isa = inverse_permutation(&sa);
            let (plcp, comparisons) = irreducible_plcp(text.symbols(), &sa, &isa);
            assert_eq!(
                plcp.iter().map(|&v| v as usize).collect::<Vec<_>>(),
                arrays.plcp
            );
            let budget = arrays.irreducible_sum() as u64 + text.len() as u64;
            assert!(
                comparisons <= budget,
                "{comparisons} comparisons exceed budget {budget}"
            );
        }
    }

    #[test]
    fn unary_text_is_linear_despite_quadratic_lcp_mass() {
        let symbols: Vec<u32> = std::iter::repeat_n(1, 50_000).chain([0]).collect();
        let sa = suffix_array(&symbols);
        assert_eq!(sa[0], 50_001);
        assert_eq!(sa[1], 50_000);
        assert_eq!(sa[50_000], 1);
        let isa = inverse_permutation(&sa);
        let (plcp, comparisons) = irreducible_plcp(&symbols, &sa, &isa);
        assert_eq!(plcp[0], 49_999);
        assert_eq!(plcp[49_999], 0);
        // Only the first position is measured directly; everything else
        // follows from its left neighbour.
        assert!(comparisons as usize <= 2 * symbols.len());
    }
}
