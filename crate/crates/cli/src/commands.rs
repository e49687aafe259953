//! Implementations of the subcommands. Each returns the process exit code;
//! errors bubble up to `main` for uniform reporting.

use crate::{FormatArg, GenCommand, ReprArg, VectorArg};
use serde_json::json;
use slcp::analysis::{compute_stats_from_text, csv_header, csv_row, entropy_estimate};
use slcp::bench::{self, BenchConfig, BenchResult};
use slcp::bitcodec::BitVectorKind;
use slcp::csa::{build_csa, Csa};
use slcp::lcpbuild::{build_plcp_from_csa, build_sampled_lcp_from_csa_with_stats, ScanStats};
use slcp::plcprepr::{PlcpRepr, SampledTextBuilder, UnaryPlcpBuilder};
use slcp::sampledlcp::{SampledLcp, NO_EXTRA_SAMPLES};
use slcp::serialize::{peek_struct_tag, INDEX_MAGIC, STRUCT_TAG_PLCP, STRUCT_TAG_SAMPLED_LCP};
use slcp::textstore::{
    generate_de_bruijn, generate_random, load_text, Text, DEFAULT_TERMINATOR_BYTE,
};
use slcp::verify::{run_verify, VerifyConfig, VerifyReport};
use slcp::{Error, Result};
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

fn read_text(path: &Path) -> Result<Text> {
    let bytes = fs::read(path)?;
    load_text(&bytes, DEFAULT_TERMINATOR_BYTE)
}

fn read_index(path: &Path) -> Result<Csa> {
    let bytes = fs::read(path)?;
    Csa::from_bytes(&bytes)
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serializes")
    );
}

pub fn build(input: &Path, output: &Path, d: u32) -> Result<ExitCode> {
    let text = read_text(input)?;
    let start = Instant::now();
    let csa = build_csa(&text, d)?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    let bytes = csa.to_bytes();
    fs::write(output, &bytes)?;
    let report = csa.size_report();
    print_json(&json!({
        "n": csa.n(),
        "sigma": text.sigma(),
        "run_count": csa.run_count(),
        "d": d,
        "size_bits": report.total_bits(),
        "bits_per_symbol": report.bits_per_symbol(),
        "build_ms": build_ms,
        "bytes_written": bytes.len(),
        "output": output.display().to_string(),
    }));
    Ok(ExitCode::SUCCESS)
}

/// Parses the sampled-lcp spacing: a positive number or "inf".
fn parse_spacing(param: Option<&str>) -> Result<Option<u64>> {
    match param {
        None | Some("inf") => Ok(None),
        Some(s) => s.parse().map(Some).map_err(|_| {
            Error::InvalidParameter(format!("--param must be a number or \"inf\", got {s:?}"))
        }),
    }
}

/// Parses the plcp-sampled rate: a positive number, defaulting to 16.
fn parse_rate(param: Option<&str>) -> Result<u64> {
    match param {
        None => Ok(16),
        Some(s) => s.parse().map_err(|_| {
            Error::InvalidParameter(format!("--param must be a number for this repr, got {s:?}"))
        }),
    }
}

fn reject_param(param: Option<&str>, repr: &str) -> Result<()> {
    match param {
        Some(_) => Err(Error::InvalidParameter(format!(
            "--param does not apply to {repr}"
        ))),
        None => Ok(()),
    }
}

fn reject_vector(vector: Option<VectorArg>, repr: &str) -> Result<()> {
    match vector {
        Some(_) => Err(Error::InvalidParameter(format!(
            "--vector does not apply to {repr}"
        ))),
        None => Ok(()),
    }
}

pub fn lcp_build(
    input: &Path,
    output: &Path,
    repr: ReprArg,
    param: Option<&str>,
    vector: Option<VectorArg>,
) -> Result<ExitCode> {
    let csa = read_index(input)?;
    let hash = csa.content_hash();
    let n = csa.n();
    let start = Instant::now();

    enum Built {
        Repr(PlcpRepr, ScanStats),
        Lcp(SampledLcp, ScanStats),
    }

    let built = match repr {
        ReprArg::PlcpPlain | ReprArg::PlcpRle => {
            let name = if matches!(repr, ReprArg::PlcpPlain) {
                "plcp-plain"
            } else {
                "plcp-rle"
            };
            reject_param(param, name)?;
            reject_vector(vector, name)?;
            let kind = if matches!(repr, ReprArg::PlcpPlain) {
                BitVectorKind::Plain
            } else {
                BitVectorKind::Rle
            };
            let mut b = UnaryPlcpBuilder::new(kind);
            let stats = build_plcp_from_csa(&csa, &mut b);
            Built::Repr(PlcpRepr::Encoded(b.finish()), stats)
        }
        ReprArg::PlcpSampled => {
            reject_vector(vector, "plcp-sampled")?;
            let q = parse_rate(param)?;
            let mut b = SampledTextBuilder::new(q)?;
            let stats = build_plcp_from_csa(&csa, &mut b);
            Built::Repr(PlcpRepr::Sampled(b.finish()), stats)
        }
        ReprArg::SampledLcp => {
            let d_prime = parse_spacing(param)?;
            let kind = vector.map_or(BitVectorKind::Gap, VectorArg::kind);
            let (lcp, stats) = build_sampled_lcp_from_csa_with_stats(&csa, d_prime, kind)?;
            Built::Lcp(lcp, stats)
        }
    };
    let build_ms = start.elapsed().as_secs_f64() * 1e3;

    let report = match built {
        Built::Repr(repr, stats) => {
            let bytes = repr.to_bytes(&hash);
            fs::write(output, &bytes)?;
            let mut value = json!({
                "structure": repr.kind_name(),
                "n": n,
                "size_bits": repr.size_in_bits(),
                "bits_per_symbol": repr.size_in_bits() as f64 / n as f64,
                "psi_evals": stats.psi_evals,
                "build_ms": build_ms,
                "bytes_written": bytes.len(),
                "output": output.display().to_string(),
            });
            match &repr {
                PlcpRepr::Encoded(_) => {
                    value["encoded_bits"] = json!(2 * n);
                }
                PlcpRepr::Sampled(v) => {
                    value["q"] = json!(v.q());
                    value["samples"] = json!(v.sample_count());
                }
            }
            value
        }
        Built::Lcp(lcp, stats) => {
            let bytes = lcp.to_bytes(&hash);
            fs::write(output, &bytes)?;
            let size = lcp.size_report();
            json!({
                "structure": "sampled-lcp",
                "n": n,
                "d_prime": spacing_label(lcp.d_prime()),
                "vector": lcp.marks_kind().name(),
                "minimal_samples": lcp.minimal_samples(),
                "extra_samples": lcp.extra_samples(),
                "size_bits": size.total_bits(),
                "bits_per_symbol": size.bits_per_symbol(),
                "psi_evals": stats.psi_evals,
                "build_ms": build_ms,
                "bytes_written": bytes.len(),
                "output": output.display().to_string(),
            })
        }
    };
    print_json(&report);
    Ok(ExitCode::SUCCESS)
}

fn spacing_label(d_prime: u64) -> serde_json::Value {
    if d_prime == NO_EXTRA_SAMPLES {
        json!("inf")
    } else {
        json!(d_prime)
    }
}

pub fn bench(
    input: &Path,
    structure: Option<&Path>,
    queries: u64,
    seed: u64,
    format: FormatArg,
) -> Result<ExitCode> {
    let csa = read_index(input)?;
    let config = BenchConfig {
        queries,
        warmup: 1_000.min(queries),
        seed,
    };
    let mut rows: Vec<BenchResult> = vec![bench::bench_locate(&csa, &config)?];
    if let Some(path) = structure {
        let bytes = fs::read(path)?;
        let hash = csa.content_hash();
        match peek_struct_tag(&bytes)? {
            STRUCT_TAG_SAMPLED_LCP => {
                let lcp = SampledLcp::from_bytes(&bytes, &hash)?;
                rows.push(bench::bench_sampled_lcp(&csa, &lcp, &config)?);
            }
            STRUCT_TAG_PLCP => {
                let repr = PlcpRepr::from_bytes(&bytes, &hash)?;
                rows.push(bench::bench_plcp(&csa, &repr, &config)?);
            }
            other => {
                return Err(Error::MalformedData(format!(
                    "unknown structure tag {other}"
                )));
            }
        }
    }
    match format {
        FormatArg::Csv => {
            println!("{}", bench::csv_header());
            for row in &rows {
                println!("{}", bench::csv_row(row));
            }
        }
        FormatArg::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&rows).expect("rows serialize")
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn stats(input: &Path, order: u32, format: FormatArg) -> Result<ExitCode> {
    let text = read_text(input)?;
    let stats = compute_stats_from_text(&text);
    let entropy = entropy_estimate(&text, order as usize)?;
    let name = input
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    match format {
        FormatArg::Csv => {
            println!("{}", csv_header());
            println!("{}", csv_row(&name, &stats, Some(&entropy)));
        }
        FormatArg::Json => print_json(&json!({
            "name": name,
            "stats": stats,
            "entropy": entropy,
        })),
    }
    Ok(ExitCode::SUCCESS)
}

pub fn verify(
    input: &Path,
    max_n: u64,
    sa_sample_rate: u32,
    format: Option<FormatArg>,
) -> Result<ExitCode> {
    let bytes = fs::read(input)?;
    let config = VerifyConfig {
        d: sa_sample_rate,
        max_n: max_n as usize,
        ..VerifyConfig::default()
    };

    let report = if bytes.starts_with(INDEX_MAGIC.as_bytes()) {
        verify_index_file(&bytes, config)
    } else {
        let text = load_text(&bytes, DEFAULT_TERMINATOR_BYTE)?;
        run_verify(&text, &config)?
    };

    match format {
        Some(FormatArg::Json) => {
            print_json(&json!({
                "n": report.n,
                "run_count": report.run_count,
                "passed": report.passed(),
                "checks": report.checks,
            }));
        }
        Some(FormatArg::Csv) => {
            println!("name,passed,detail");
            for check in &report.checks {
                println!(
                    "{},{},{}",
                    check.name,
                    check.passed,
                    check.detail.replace(',', ";")
                );
            }
        }
        None => {
            for check in &report.checks {
                let mark = if check.passed { "ok  " } else { "FAIL" };
                println!("{mark}  {:<34}  {}", check.name, check.detail);
            }
            let verdict = if report.passed() { "passed" } else { "FAILED" };
            println!(
                "verification {verdict}: {} checks, n = {}",
                report.checks.len(),
                report.n
            );
        }
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Verifies an index file: integrity, text recovery, deterministic rebuild,
/// then the full suite on the recovered text. Integrity failures become a
/// failed check instead of an error so they are reported in context.
fn verify_index_file(bytes: &[u8], config: VerifyConfig) -> VerifyReport {
    use slcp::verify::CheckOutcome;
    match Csa::from_bytes(bytes) {
        Err(err) => VerifyReport {
            n: 0,
            run_count: 0,
            checks: vec![CheckOutcome {
                name: "index file integrity",
                passed: false,
                detail: err.to_string(),
            }],
        },
        Ok(csa) => {
            let mut checks = vec![CheckOutcome {
                name: "index file integrity",
                passed: true,
                detail: format!("{} byte index file", bytes.len()),
            }];
            let recovered = csa.display_bytes(1, csa.n() - 1);
            let config = VerifyConfig {
                d: csa.d(),
                ..config
            };
            let outcome = load_text(&recovered, DEFAULT_TERMINATOR_BYTE)
                .and_then(|text| run_verify(&text, &config));
            match outcome {
                Err(err) => {
                    checks.push(CheckOutcome {
                        name: "text recovery",
                        passed: false,
                        detail: err.to_string(),
                    });
                    VerifyReport {
                        n: csa.n(),
                        run_count: csa.run_count() as u64,
                        checks,
                    }
                }
                Ok(mut report) => {
                    let rebuilt = load_text(&recovered, DEFAULT_TERMINATOR_BYTE)
                        .and_then(|text| build_csa(&text, csa.d()))
                        .is_ok_and(|again| again.to_bytes() == bytes);
                    checks.push(CheckOutcome {
                        name: "deterministic rebuild",
                        passed: rebuilt,
                        detail: "index rebuilt from recovered text is byte-identical".into(),
                    });
                    checks.append(&mut report.checks);
                    VerifyReport { checks, ..report }
                }
            }
        }
    }
}

pub fn gen(kind: GenCommand) -> Result<ExitCode> {
    let (text, label, output) = match kind {
        GenCommand::Random {
            sigma,
            length,
            seed,
            output,
        } => (
            generate_random(sigma, length as usize, seed)?,
            "random",
            output,
        ),
        GenCommand::DeBruijn {
            sigma,
            order,
            output,
        } => (generate_de_bruijn(sigma, order)?, "de-bruijn", output),
        GenCommand::Unary { length, output } => {
            (generate_random(1, length as usize, 0)?, "unary", output)
        }
        GenCommand::Concat {
            input,
            copies,
            output,
        } => {
            let base = fs::read(&input)?;
            load_text(&base, DEFAULT_TERMINATOR_BYTE)?;
            let bytes: Vec<u8> = base
                .iter()
                .copied()
                .cycle()
                .take(base.len() * copies as usize)
                .collect();
            fs::write(&output, &bytes)?;
            print_json(&json!({
                "kind": "concat",
                "copies": copies,
                "period": base.len(),
                "length": bytes.len(),
                "output": output.display().to_string(),
            }));
            return Ok(ExitCode::SUCCESS);
        }
    };
    let bytes = text.to_bytes();
    fs::write(&output, &bytes)?;
    print_json(&json!({
        "kind": label,
        "sigma": text.sigma(),
        "length": bytes.len(),
        "output": output.display().to_string(),
    }));
    Ok(ExitCode::SUCCESS)
}
