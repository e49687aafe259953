//! Bundled self-checks: rebuilds every structure for one input and
//! cross-validates it against the brute-force reference arrays and the
//! identities the values must satisfy.
//!
//! Each property becomes one named [`CheckOutcome`]; a report passes only if
//! every check does. Inputs larger than the configured limit are rejected up
//! front, because the reference arrays are quadratic-ish and exist precisely
//! to keep this path honest.

use crate::bitcodec::BitVectorKind;
use crate::csa::{build_csa, Csa};
use crate::error::Result;
use crate::lcpbuild::{build_plcp_from_csa, build_sampled_lcp_from_csa};
use crate::oracle::{naive_count, naive_reference_with_limit, RefArrays, DEFAULT_ORACLE_LIMIT};
use crate::plcprepr::{build_sampled_plcp_text_from_csa, build_unary_plcp_from_csa, PlcpRepr};
use crate::sampledlcp::SampledLcp;
use crate::textstore::Indexable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Structure parameters used for the rebuilt structures.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerifyConfig {
    /// Suffix array sample rate.
    pub d: u32,
    /// Extra-sample spacing of the sampled LCP array; `None` keeps only the
    /// strictly minimal samples.
    pub d_prime: Option<u64>,
    /// Text-order sample rate of the sampled permuted-LCP representation.
    pub q: u64,
    /// Largest accepted input; the reference arrays are built brute force.
    pub max_n: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            d: 32,
            d_prime: Some(32),
            q: 16,
            max_n: DEFAULT_ORACLE_LIMIT,
        }
    }
}

/// Result of one named property check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// All check outcomes for one input.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub n: u64,
    pub run_count: u64,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn push(checks: &mut Vec<CheckOutcome>, name: &'static str, mismatches: u64, detail: String) {
    checks.push(CheckOutcome {
        name,
        passed: mismatches == 0,
        detail,
    });
}

fn count_check(
    checks: &mut Vec<CheckOutcome>,
    name: &'static str,
    total: u64,
    mismatches: u64,
    what: &str,
) {
    let detail = if mismatches == 0 {
        format!("{total} {what} match")
    } else {
        format!("{mismatches} of {total} {what} differ")
    };
    push(checks, name, mismatches, detail);
}

/// Rebuilds index and LCP structures for `text` and checks them all.
pub fn run_verify(text: &impl Indexable, config: &VerifyConfig) -> Result<VerifyReport> {
    let oracle = naive_reference_with_limit(text, config.max_n)?;
    let csa = build_csa(text, config.d)?;
    let n = csa.n();
    let mut checks = Vec::new();

    check_positions(&mut checks, text, &csa, &oracle);
    check_counts(&mut checks, text, &csa);
    check_plcp_stream(&mut checks, &csa, &oracle);
    check_structural_identities(&mut checks, &csa, &oracle);

    let sampled = build_sampled_lcp_from_csa(&csa, config.d_prime, BitVectorKind::Gap)?;
    check_sampled_lcp(&mut checks, &csa, &sampled, &oracle);

    let reprs = [
        PlcpRepr::Encoded(build_unary_plcp_from_csa(&csa, BitVectorKind::Plain)),
        PlcpRepr::Encoded(build_unary_plcp_from_csa(&csa, BitVectorKind::Rle)),
        PlcpRepr::Sampled(build_sampled_plcp_text_from_csa(&csa, config.q.min(n))?),
    ];
    for repr in &reprs {
        check_plcp_repr(&mut checks, &csa, repr, &oracle);
    }

    check_serialization(&mut checks, &csa, &sampled, &reprs);

    Ok(VerifyReport {
        n,
        run_count: csa.run_count() as u64,
        checks,
    })
}

/// Verifies with default parameters.
pub fn run_verify_default(text: &impl Indexable) -> Result<VerifyReport> {
    run_verify(text, &VerifyConfig::default())
}

fn check_positions(
    checks: &mut Vec<CheckOutcome>,
    text: &impl Indexable,
    csa: &Csa,
    oracle: &RefArrays,
) {
    let n = csa.n();
    let mut sa_bad = 0u64;
    let mut psi_bad = 0u64;
    for x in 1..=n {
        if csa.locate(x) != oracle.sa[x as usize - 1] as u64 {
            sa_bad += 1;
        }
        let next_pos = oracle.sa[x as usize - 1] % oracle.n();
        if csa.psi(x) != oracle.isa[next_pos] as u64 {
            psi_bad += 1;
        }
    }
    count_check(
        checks,
        "suffix array positions",
        n,
        sa_bad,
        "locate results",
    );
    count_check(checks, "psi permutation", n, psi_bad, "psi values");

    let display_bad = u64::from(csa.display(1, n) != text.symbols());
    count_check(
        checks,
        "display reconstruction",
        1,
        display_bad,
        "full-text extractions",
    );
}

fn check_counts(checks: &mut Vec<CheckOutcome>, text: &impl Indexable, csa: &Csa) {
    let symbols = text.symbols();
    let n = symbols.len();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad = 0u64;
    let total = 100u64;
    // Counting is exact only for patterns that keep the final sequence
    // symbol out of non-final positions, so the perturbation skips it.
    let end_symbol = symbols[n - 1];
    for t in 0..total {
        let len = rng.random_range(1..=8usize.min(n));
        let start = rng.random_range(0..n - len + 1);
        let mut pattern: Vec<u32> = symbols[start..start + len].to_vec();
        if t % 4 == 3 {
            // Perturb every fourth pattern so misses are exercised too.
            let mut bumped = pattern[0].wrapping_add(1);
            if bumped == end_symbol {
                bumped += 1;
            }
            pattern[0] = bumped;
        }
        if csa.count(&pattern) != naive_count(text, &pattern) as u64 {
            bad += 1;
        }
    }
    count_check(checks, "pattern counts", total, bad, "pattern counts");
}

fn check_plcp_stream(checks: &mut Vec<CheckOutcome>, csa: &Csa, oracle: &RefArrays) {
    let n = csa.n();
    let mut bad = 0u64;
    let stats = build_plcp_from_csa(csa, &mut |i: u64, value: u64| {
        if value != oracle.plcp[i as usize - 1] as u64 {
            bad += 1;
        }
    });
    count_check(checks, "plcp stream", n, bad, "plcp values");

    let count_ok = stats.irreducible_count == oracle.irreducible_positions().len() as u64;
    let sum_ok = stats.irreducible_sum == oracle.irreducible_sum() as u64;
    push(
        checks,
        "irreducible totals",
        u64::from(!(count_ok && sum_ok)),
        format!(
            "count {} sum {} (expected {} and {})",
            stats.irreducible_count,
            stats.irreducible_sum,
            oracle.irreducible_positions().len(),
            oracle.irreducible_sum()
        ),
    );

    let budget = 3 * (stats.irreducible_sum + n);
    push(
        checks,
        "psi evaluation budget",
        u64::from(stats.psi_evals > budget),
        format!("{} evaluations within 3(S + n) = {budget}", stats.psi_evals),
    );
}

fn check_structural_identities(checks: &mut Vec<CheckOutcome>, csa: &Csa, oracle: &RefArrays) {
    let n = oracle.n();
    let minimal: Vec<usize> = (1..=n)
        .filter(|&i| i == n || oracle.irreducible[i])
        .collect();
    let minimal_sum: usize = minimal.iter().map(|&i| oracle.plcp[i - 1]).sum();
    let runs = oracle.bwt_run_count();

    let run_ok = minimal.len() == runs && csa.run_count() == runs;
    push(
        checks,
        "minimal count equals run count",
        u64::from(!run_ok),
        format!("{} minimal positions, {} runs", minimal.len(), runs),
    );

    let expected = oracle.irreducible_sum() - (n - runs);
    push(
        checks,
        "minimal sum identity",
        u64::from(minimal_sum != expected),
        format!("minimal sum {minimal_sum}, irreducible sum minus non-maximal count {expected}"),
    );
}

fn check_sampled_lcp(
    checks: &mut Vec<CheckOutcome>,
    csa: &Csa,
    sampled: &SampledLcp,
    oracle: &RefArrays,
) {
    let n = csa.n();
    let mut value_bad = 0u64;
    let mut walk_bad = 0u64;
    for x in 1..=n {
        let (value, steps) = sampled.access_with_steps(csa, x);
        if value != oracle.lcp[x as usize - 1] as u64 {
            value_bad += 1;
        }
        if steps >= sampled.d_prime() {
            walk_bad += 1;
        }
    }
    count_check(checks, "sampled lcp access", n, value_bad, "lcp values");
    count_check(
        checks,
        "sampled lcp walk bound",
        n,
        walk_bad,
        "walk lengths under the spacing",
    );
}

fn check_plcp_repr(checks: &mut Vec<CheckOutcome>, csa: &Csa, repr: &PlcpRepr, oracle: &RefArrays) {
    let n = csa.n();
    let mut bad = 0u64;
    for i in 1..=n {
        if repr.access(csa, i) != oracle.plcp[i as usize - 1] as u64 {
            bad += 1;
        }
    }
    let name = match repr.kind_name() {
        "plcp-plain" => "plcp access (plain)",
        "plcp-rle" => "plcp access (rle)",
        _ => "plcp access (sampled)",
    };
    count_check(checks, name, n, bad, "plcp values");
}

fn check_serialization(
    checks: &mut Vec<CheckOutcome>,
    csa: &Csa,
    sampled: &SampledLcp,
    reprs: &[PlcpRepr],
) {
    let bytes = csa.to_bytes();
    let csa_ok = Csa::from_bytes(&bytes).is_ok_and(|c| c.to_bytes() == bytes);
    push(
        checks,
        "index round trip",
        u64::from(!csa_ok),
        format!("{} byte index file", bytes.len()),
    );

    let hash = csa.content_hash();
    let mut bad = 0u64;
    let mut total = 0u64;

    total += 1;
    let sampled_bytes = sampled.to_bytes(&hash);
    if SampledLcp::from_bytes(&sampled_bytes, &hash).map_or(true, |s| s != *sampled) {
        bad += 1;
    }
    let mut wrong = hash;
    wrong[0] ^= 0xFF;
    total += 1;
    if SampledLcp::from_bytes(&sampled_bytes, &wrong).is_ok() {
        bad += 1;
    }
    for repr in reprs {
        total += 1;
        let repr_bytes = repr.to_bytes(&hash);
        if PlcpRepr::from_bytes(&repr_bytes, &hash).map_or(true, |r| r != *repr) {
            bad += 1;
        }
    }
    count_check(
        checks,
        "structure round trips",
        total,
        bad,
        "round trips and pairing checks",
    );
}
