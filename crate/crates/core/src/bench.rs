//! Deterministic single-threaded query benchmarking.
//!
//! Every run draws its query positions from a seeded ChaCha8 stream, executes
//! an untimed warm-up prefix, then times each measured query individually on
//! the monotonic clock. Two runs with the same seed therefore visit the same
//! positions and report identical step counts; only the wall-clock columns
//! vary. Step counts come from the structures' own instrumented accessors:
//! suffix-array-sample walks for `locate`, mark walks for the sampled LCP
//! array, and the position-lookup walk for the permuted-LCP representations.

use crate::csa::Csa;
use crate::error::{Error, Result};
use crate::plcprepr::PlcpRepr;
use crate::sampledlcp::{SampledLcp, NO_EXTRA_SAMPLES};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::hint::black_box;
use std::time::Instant;

/// Parameters of a benchmark run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BenchConfig {
    /// Measured queries.
    pub queries: u64,
    /// Untimed queries executed first.
    pub warmup: u64,
    /// Seed of the query position stream.
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            queries: 100_000,
            warmup: 1_000,
            seed: 0x5EED,
        }
    }
}

/// Measurements of one structure under one configuration.
#[derive(Debug, Clone, Serialize)]
pub struct BenchResult {
    /// Structure name: `locate`, `sampled-lcp`, `plcp-plain`, `plcp-rle` or
    /// `plcp-sampled`.
    pub structure: String,
    /// Suffix array sample rate of the underlying index.
    pub d: u32,
    /// Text-order sample rate, for `plcp-sampled` only.
    pub q: Option<u64>,
    /// Extra-sample spacing, for `sampled-lcp` only; `u64::MAX` encodes "no
    /// extra samples".
    pub d_prime: Option<u64>,
    /// Bit vector encoding backing the structure, where one applies.
    pub vector: Option<&'static str>,
    /// Size of the benched structure (the index is not included).
    pub size_bits: u64,
    pub bits_per_symbol: f64,
    pub queries: u64,
    pub seed: u64,
    pub mean_psi_steps: f64,
    pub max_psi_steps: u64,
    pub mean_latency_ns: f64,
    pub p99_latency_ns: u64,
}

struct Measured {
    mean_steps: f64,
    max_steps: u64,
    mean_latency_ns: f64,
    p99_latency_ns: u64,
}

/// Drives one run: `query` answers for a position in `1..=n` and returns its
/// step count.
fn run(n: u64, config: &BenchConfig, mut query: impl FnMut(u64) -> u64) -> Result<Measured> {
    if config.queries == 0 {
        return Err(Error::InvalidParameter(
            "a benchmark needs at least one query".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.warmup {
        black_box(query(rng.random_range(1..=n)));
    }
    let mut latencies = Vec::with_capacity(config.queries as usize);
    let mut total_steps = 0u64;
    let mut max_steps = 0u64;
    for _ in 0..config.queries {
        let x = rng.random_range(1..=n);
        let start = Instant::now();
        let steps = black_box(query(x));
        latencies.push(start.elapsed().as_nanos() as u64);
        total_steps += steps;
        max_steps = max_steps.max(steps);
    }
    latencies.sort_unstable();
    let count = config.queries as f64;
    let p99_rank = ((count * 0.99).ceil() as usize).clamp(1, latencies.len());
    Ok(Measured {
        mean_steps: total_steps as f64 / count,
        max_steps,
        mean_latency_ns: latencies.iter().sum::<u64>() as f64 / count,
        p99_latency_ns: latencies[p99_rank - 1],
    })
}

/// Benches plain `locate` over uniform suffix array positions. This is the
/// lower bound for every LCP query that starts with a position lookup.
pub fn bench_locate(csa: &Csa, config: &BenchConfig) -> Result<BenchResult> {
    let m = run(csa.n(), config, |x| {
        let (value, steps) = csa.locate_with_steps(x);
        black_box(value);
        steps as u64
    })?;
    let report = csa.size_report();
    Ok(BenchResult {
        structure: "locate".into(),
        d: csa.d(),
        q: None,
        d_prime: None,
        vector: None,
        size_bits: report.total_bits(),
        bits_per_symbol: report.bits_per_symbol(),
        queries: config.queries,
        seed: config.seed,
        mean_psi_steps: m.mean_steps,
        max_psi_steps: m.max_steps,
        mean_latency_ns: m.mean_latency_ns,
        p99_latency_ns: m.p99_latency_ns,
    })
}

/// Benches sampled-LCP access over uniform suffix array positions; the step
/// count is the length of the walk to the nearest sample.
pub fn bench_sampled_lcp(csa: &Csa, lcp: &SampledLcp, config: &BenchConfig) -> Result<BenchResult> {
    let m = run(csa.n(), config, |x| {
        let (value, steps) = lcp.access_with_steps(csa, x);
        black_box(value);
        steps
    })?;
    let report = lcp.size_report();
    Ok(BenchResult {
        structure: "sampled-lcp".into(),
        d: csa.d(),
        q: None,
        d_prime: Some(lcp.d_prime()),
        vector: Some(lcp.marks_kind().name()),
        size_bits: report.total_bits(),
        bits_per_symbol: report.bits_per_symbol(),
        queries: config.queries,
        seed: config.seed,
        mean_psi_steps: m.mean_steps,
        max_psi_steps: m.max_steps,
        mean_latency_ns: m.mean_latency_ns,
        p99_latency_ns: m.p99_latency_ns,
    })
}

/// Benches LCP access through a permuted-LCP representation: each query
/// resolves a suffix array position to its text position with `locate`, then
/// reads the representation there. The step count covers the `locate` walk,
/// which dominates; symbol comparisons of the sampled variant show up in the
/// latency columns instead.
pub fn bench_plcp(csa: &Csa, repr: &PlcpRepr, config: &BenchConfig) -> Result<BenchResult> {
    let m = run(csa.n(), config, |x| {
        let (i, steps) = csa.locate_with_steps(x);
        black_box(repr.access(csa, i));
        steps as u64
    })?;
    let (q, vector) = match repr {
        PlcpRepr::Encoded(v) => (None, Some(v.kind().name())),
        PlcpRepr::Sampled(v) => (Some(v.q()), None),
    };
    Ok(BenchResult {
        structure: repr.kind_name().into(),
        d: csa.d(),
        q,
        d_prime: None,
        vector,
        size_bits: repr.size_in_bits(),
        bits_per_symbol: repr.size_in_bits() as f64 / csa.n() as f64,
        queries: config.queries,
        seed: config.seed,
        mean_psi_steps: m.mean_steps,
        max_psi_steps: m.max_steps,
        mean_latency_ns: m.mean_latency_ns,
        p99_latency_ns: m.p99_latency_ns,
    })
}

/// Column names matching [`csv_row`].
pub fn csv_header() -> &'static str {
    "structure,d,q,d_prime,vector,size_bits,bits_per_symbol,queries,seed,\
     mean_psi_steps,max_psi_steps,mean_latency_ns,p99_latency_ns"
}

/// One CSV row; inapplicable parameter columns stay empty and an unbounded
/// spacing prints as `inf`.
pub fn csv_row(r: &BenchResult) -> String {
    let q = r.q.map(|v| v.to_string()).unwrap_or_default();
    let d_prime = match r.d_prime {
        Some(NO_EXTRA_SAMPLES) => "inf".to_string(),
        Some(v) => v.to_string(),
        None => String::new(),
    };
    format!(
        "{},{},{q},{d_prime},{},{},{:.4},{},{},{:.4},{},{:.1},{}",
        r.structure,
        r.d,
        r.vector.unwrap_or(""),
        r.size_bits,
        r.bits_per_symbol,
        r.queries,
        r.seed,
        r.mean_psi_steps,
        r.max_psi_steps,
        r.mean_latency_ns,
        r.p99_latency_ns,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcodec::BitVectorKind;
    use crate::csa::build_csa;
    use crate::lcpbuild::build_sampled_lcp_from_csa;
    use crate::plcprepr::{build_sampled_plcp_text_from_csa, build_unary_plcp_from_csa};
    use crate::textstore::generate_random;

    fn small_config() -> BenchConfig {
        BenchConfig {
            queries: 500,
            warmup: 50,
            seed: 99,
        }
    }

    #[test]
    fn deterministic_step_counts() {
        let text = generate_random(4, 3_000, 12).unwrap();
        let csa = build_csa(&text, 8).unwrap();
        let lcp = build_sampled_lcp_from_csa(&csa, Some(16), BitVectorKind::Gap).unwrap();
        let a = bench_sampled_lcp(&csa, &lcp, &small_config()).unwrap();
        let b = bench_sampled_lcp(&csa, &lcp, &small_config()).unwrap();
        assert_eq!(a.mean_psi_steps, b.mean_psi_steps);
        assert_eq!(a.max_psi_steps, b.max_psi_steps);
        let c = bench_sampled_lcp(
            &csa,
            &lcp,
            &BenchConfig {
                seed: 100,
                ..small_config()
            },
        )
        .unwrap();
        assert_ne!(
            a.mean_psi_steps, c.mean_psi_steps,
            "a different seed visits different positions"
        );
    }

    #[test]
    fn step_counts_respect_structure_bounds() {
        let text = generate_random(4, 3_000, 12).unwrap();
        let csa = build_csa(&text, 8).unwrap();
        let lcp = build_sampled_lcp_from_csa(&csa, Some(16), BitVectorKind::Gap).unwrap();
        let locate = bench_locate(&csa, &small_config()).unwrap();
        assert!(
            locate.max_psi_steps < 8,
            "locate walks at most d - 1 = 7 steps"
        );
        assert!(locate.mean_psi_steps <= locate.max_psi_steps as f64);
        let sampled = bench_sampled_lcp(&csa, &lcp, &small_config()).unwrap();
        assert!(
            sampled.max_psi_steps < 16,
            "sample spacing 16 caps the walk at 15"
        );
    }

    #[test]
    fn plcp_lookup_matches_locate_walk() {
        let text = generate_random(4, 3_000, 12).unwrap();
        let csa = build_csa(&text, 8).unwrap();
        let config = small_config();
        let locate = bench_locate(&csa, &config).unwrap();
        let plain = build_unary_plcp_from_csa(&csa, BitVectorKind::Plain);
        let encoded = bench_plcp(&csa, &PlcpRepr::Encoded(plain), &config).unwrap();
        assert_eq!(encoded.mean_psi_steps, locate.mean_psi_steps);
        assert_eq!(encoded.max_psi_steps, locate.max_psi_steps);
        let sampled = build_sampled_plcp_text_from_csa(&csa, 8).unwrap();
        let sampled = bench_plcp(&csa, &PlcpRepr::Sampled(sampled), &config).unwrap();
        assert_eq!(sampled.q, Some(8));
        assert_eq!(sampled.vector, None);
    }

    #[test]
    fn rejects_empty_runs() {
        let text = generate_random(4, 100, 12).unwrap();
        let csa = build_csa(&text, 4).unwrap();
        let config = BenchConfig {
            queries: 0,
            warmup: 0,
            seed: 1,
        };
        assert!(bench_locate(&csa, &config).is_err());
    }

    #[test]
    fn csv_shape_and_markers() {
        let text = generate_random(4, 500, 12).unwrap();
        let csa = build_csa(&text, 4).unwrap();
        let config = BenchConfig {
            queries: 50,
            warmup: 5,
            seed: 3,
        };
        let fields = csv_header().split(',').count();
        let locate = bench_locate(&csa, &config).unwrap();
        assert_eq!(csv_row(&locate).split(',').count(), fields);
        let lcp = build_sampled_lcp_from_csa(&csa, None, BitVectorKind::Gap).unwrap();
        let row = csv_row(&bench_sampled_lcp(&csa, &lcp, &config).unwrap());
        assert_eq!(row.split(',').count(), fields);
        assert!(
            row.contains(",inf,"),
            "unbounded spacing prints as inf: {row}"
        );
        let json = serde_json::to_string(&locate).unwrap();
        assert!(json.contains("\"mean_psi_steps\""));
    }
}
