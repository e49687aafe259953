//! Statistics over the LCP structure of a text: run counts, classified
//! value counts and sums, empirical entropy, and the entropy-based estimate
//! of the irreducible sum, plus the repeated-copy experiment.

use crate::csa::Csa;
use crate::error::{Error, Result};
use crate::lcpbuild::classify_minimal_from_csa;
use crate::suffixcore::{inverse_permutation, plcp_from_sa, suffix_array};
use crate::textstore::{generate_concat, Indexable, Text};
use serde::Serialize;
use std::collections::HashMap;

/// A count of positions and the sum of their values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub count: u64,
    pub sum: u64,
}

/// Classified LCP statistics for one text.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LcpStats {
    pub n: u64,
    pub run_count: u64,
    pub irreducible: Counts,
    pub minimal: Counts,
    pub strictly_minimal: Counts,
    /// Irreducible sum divided by `n`; the per-symbol construction cost.
    pub sum_per_n: f64,
}

impl LcpStats {
    fn from_parts(
        n: u64,
        run_count: u64,
        irreducible: Counts,
        minimal: Counts,
        strictly_minimal: Counts,
    ) -> LcpStats {
        assert_eq!(minimal.count, run_count, "one minimal position per run");
        assert_eq!(
            minimal.sum,
            irreducible.sum - (n - run_count),
            "minimal and irreducible totals must differ by the non-run position count"
        );
        assert!(strictly_minimal.count <= minimal.count);
        LcpStats {
            n,
            run_count,
            irreducible,
            minimal,
            strictly_minimal,
            sum_per_n: irreducible.sum as f64 / n as f64,
        }
    }
}

/// Statistics via the index-driven scan.
pub fn compute_stats_from_csa(csa: &Csa) -> LcpStats {
    let c = classify_minimal_from_csa(csa);
    LcpStats::from_parts(
        csa.n(),
        csa.run_count() as u64,
        Counts {
            count: c.stats.irreducible_count,
            sum: c.stats.irreducible_sum,
        },
        Counts {
            count: c.minimal_count(),
            sum: c.minimal_sum(),
        },
        Counts {
            count: c.strictly_minimal_count(),
            sum: c.strictly_minimal_sum(),
        },
    )
}

/// Statistics via plain suffix arrays; same identities, no index needed.
pub fn compute_stats_from_text(text: &impl Indexable) -> LcpStats {
    let symbols = text.symbols();
    let n = symbols.len();
    assert!(n > 0);
    let sa = suffix_array(symbols);
    let isa = inverse_permutation(&sa);
    let plcp = plcp_from_sa(symbols, &sa, &isa);

    let mut run_count = 1u64;
    let preceding = |x: usize| symbols[(sa[x - 1] as usize + n - 2) % n];
    for x in 2..=n {
        if preceding(x) != preceding(x - 1) {
            run_count += 1;
        }
    }

    let maximal = |i: usize| -> bool {
        let x = isa[i - 1];
        if x == 1 || i == 1 {
            return true;
        }
        let j = sa[x as usize - 2] as usize;
        j == 1 || symbols[i - 2] != symbols[j - 2]
    };

    let mut irreducible = Counts { count: 0, sum: 0 };
    let mut minimal = Counts { count: 0, sum: 0 };
    let mut strictly_minimal = Counts { count: 0, sum: 0 };
    for i in 1..=n {
        let v = plcp[i - 1] as u64;
        if maximal(i) {
            irreducible.count += 1;
            irreducible.sum += v;
        }
        if i == n || maximal(i + 1) {
            minimal.count += 1;
            minimal.sum += v;
            if i == n || plcp[i - 1] <= plcp[i] {
                strictly_minimal.count += 1;
                strictly_minimal.sum += v;
            }
        }
    }
    LcpStats::from_parts(n as u64, run_count, irreducible, minimal, strictly_minimal)
}

/// Entropy figures for one context order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub k: u64,
    pub h_k: f64,
    pub sigma_prime: f64,
    pub s_prime: f64,
    /// Set when the estimate formula degenerates (zero entropy or an
    /// effectively unary alphabet); `s_prime` is clamped to 0 in that case.
    pub degenerate: bool,
}

/// Packed context key → (occurrence total, successor symbol → count).
type ContextTables = HashMap<u64, (u64, HashMap<u32, u64>)>;

/// Per-context successor counts over the regular symbols (the terminator is
/// excluded from both contexts and distributions).
fn context_tables(text: &Text, k: usize) -> Result<ContextTables> {
    let symbols = text.symbols();
    let m = symbols.len() - 1;
    if m <= k {
        return Err(Error::InvalidParameter(format!(
            "context order {k} needs more than {k} regular symbols, have {m}"
        )));
    }
    let shift = 64 - u64::from(text.sigma()).leading_zeros() as usize;
    if k * shift > 64 {
        return Err(Error::InvalidParameter(format!(
            "context order {k} does not fit packed keys for alphabet size {}",
            text.sigma()
        )));
    }
    let mut tables = ContextTables::new();
    let mut key = 0u64;
    let key_bits = k * shift;
    let mask = if key_bits == 0 {
        0
    } else if key_bits >= 64 {
        u64::MAX
    } else {
        (1u64 << key_bits) - 1
    };
    for (idx, &c) in symbols[..m].iter().enumerate() {
        if idx >= k {
            let entry = tables.entry(key).or_default();
            entry.0 += 1;
            *entry.1.entry(c).or_default() += 1;
        }
        key = ((key << shift) | c as u64) & mask;
    }
    Ok(tables)
}

/// Order-k empirical entropy in bits per symbol.
pub fn empirical_entropy(text: &Text, k: usize) -> Result<f64> {
    let tables = context_tables(text, k)?;
    let total: u64 = tables.values().map(|(t, _)| t).sum();
    let mut bits = 0.0f64;
    for (t, dist) in tables.values() {
        for &c in dist.values() {
            bits += c as f64 * (*t as f64 / c as f64).log2();
        }
    }
    Ok(bits / total as f64)
}

/// Effective alphabet size: the reciprocal of the probability that two
/// symbols drawn after the same order-k context coincide.
pub fn effective_alphabet(text: &Text, k: usize) -> Result<f64> {
    let tables = context_tables(text, k)?;
    let total: u64 = tables.values().map(|(t, _)| t).sum();
    let mut collision = 0.0f64;
    for (t, dist) in tables.values() {
        let w = *t as f64 / total as f64;
        let inner: f64 = dist.values().map(|&c| (c as f64 / *t as f64).powi(2)).sum();
        collision += w * inner;
    }
    Ok(1.0 / collision)
}

/// `n (1 - 1/sigma') log2(n) / h - n / sigma'`: the expected irreducible
/// sum for an entropy-h source. May be negative for degenerate inputs.
pub fn estimate_irreducible_sum(n: u64, sigma_prime: f64, h: f64) -> Result<f64> {
    if h <= 0.0 {
        return Err(Error::InvalidParameter(
            "irreducible-sum estimate needs positive entropy".into(),
        ));
    }
    if sigma_prime < 1.0 {
        return Err(Error::InvalidParameter(
            "effective alphabet size cannot be below 1".into(),
        ));
    }
    let n = n as f64;
    Ok(n * (1.0 - 1.0 / sigma_prime) * n.log2() / h - n / sigma_prime)
}

/// Computes all entropy figures for one context order, clamping the
/// estimate to 0 (and flagging it) when the formula degenerates.
pub fn entropy_estimate(text: &Text, k: usize) -> Result<EntropyEstimate> {
    let h_k = empirical_entropy(text, k)?;
    let sigma_prime = effective_alphabet(text, k)?;
    let (s_prime, degenerate) = if h_k <= 0.0 {
        (0.0, true)
    } else {
        let raw = estimate_irreducible_sum(text.len() as u64, sigma_prime, h_k)?;
        if raw < 0.0 {
            (0.0, true)
        } else {
            (raw, false)
        }
    };
    Ok(EntropyEstimate {
        k: k as u64,
        h_k,
        sigma_prime,
        s_prime,
        degenerate,
    })
}

/// Outcome of the repeated-copy experiment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop1Report {
    pub copies: u64,
    pub period: u64,
    pub base_sum: u64,
    pub measured_sum: u64,
    pub predicted_sum: u64,
    pub matches: bool,
}

/// Concatenates `copies` copies of `base` and checks that the measured
/// irreducible sum equals `base_sum + (copies - 1) * period` exactly.
pub fn prop1_experiment(base: &Text, copies: usize) -> Result<Prop1Report> {
    if copies < 2 {
        return Err(Error::InvalidParameter(
            "the experiment needs at least 2 copies".into(),
        ));
    }
    let base_stats = compute_stats_from_text(base);
    let concat = generate_concat(base, copies)?;
    let measured = compute_stats_from_text(&concat);
    let period = base.len() as u64;
    let predicted = base_stats.irreducible.sum + (copies as u64 - 1) * period;
    Ok(Prop1Report {
        copies: copies as u64,
        period,
        base_sum: base_stats.irreducible.sum,
        measured_sum: measured.irreducible.sum,
        predicted_sum: predicted,
        matches: measured.irreducible.sum == predicted,
    })
}

/// Column names matching [`csv_row`]. One row per analysed text.
pub fn csv_header() -> &'static str {
    "name,n,run_count,irreducible_count,irreducible_sum,irreducible_sum_per_n,\
     minimal_count,minimal_sum,minimal_sum_per_n,\
     strictly_minimal_count,strictly_minimal_sum,strictly_minimal_sum_per_n,\
     k,h_k,sigma_prime,s_prime,degenerate"
}

/// Formats one statistics row; entropy columns stay empty when not computed.
pub fn csv_row(name: &str, stats: &LcpStats, entropy: Option<&EntropyEstimate>) -> String {
    let n = stats.n as f64;
    let head = format!(
        "{name},{},{},{},{},{:.6},{},{},{:.6},{},{},{:.6}",
        stats.n,
        stats.run_count,
        stats.irreducible.count,
        stats.irreducible.sum,
        stats.sum_per_n,
        stats.minimal.count,
        stats.minimal.sum,
        stats.minimal.sum as f64 / n,
        stats.strictly_minimal.count,
        stats.strictly_minimal.sum,
        stats.strictly_minimal.sum as f64 / n,
    );
    match entropy {
        Some(e) => format!(
            "{head},{},{:.6},{:.6},{:.3},{}",
            e.k, e.h_k, e.sigma_prime, e.s_prime, e.degenerate
        ),
        None => format!("{head},,,,,"),
    }
}
