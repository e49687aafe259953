//! Command line front end: build and serialize indexes and LCP structures,
//! benchmark them, compute statistics, and cross-check everything against
//! brute force.
//!
//! Exit codes: 0 success, 1 verification or data-integrity failure, 2 usage
//! error, 3 I/O error.

mod commands;

use clap::{Parser, Subcommand, ValueEnum};
use slcp::bitcodec::BitVectorKind;
use slcp::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "slcp",
    version,
    about = "Compressed suffix array and sampled LCP toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a compressed suffix array index from a text file.
    Build {
        /// Input text file; the zero byte is reserved for the terminator.
        #[arg(long)]
        input: PathBuf,
        /// Index file to write.
        #[arg(long)]
        output: PathBuf,
        /// Suffix array sample rate d: every d-th text position keeps its
        /// suffix array value.
        #[arg(long = "sa-sample-rate", default_value_t = 32,
              value_parser = clap::value_parser!(u32).range(1..))]
        sa_sample_rate: u32,
    },
    /// Build an LCP structure from an index file.
    LcpBuild {
        /// Index file produced by `build`.
        #[arg(long)]
        input: PathBuf,
        /// Structure file to write.
        #[arg(long)]
        output: PathBuf,
        /// Which structure to build.
        #[arg(long, value_enum)]
        repr: ReprArg,
        /// Structure parameter: the text-order sample rate q for
        /// plcp-sampled, the extra-sample spacing (a number or "inf") for
        /// sampled-lcp.
        #[arg(long)]
        param: Option<String>,
        /// Mark bit vector encoding for sampled-lcp.
        #[arg(long, value_enum)]
        vector: Option<VectorArg>,
    },
    /// Benchmark query latency and walk lengths for an index and optionally
    /// one structure file; bare locate is always included as the baseline.
    Bench {
        /// Index file.
        #[arg(long)]
        input: PathBuf,
        /// Structure file built from the same index.
        #[arg(long)]
        structure: Option<PathBuf>,
        /// Measured queries per structure.
        #[arg(long, default_value_t = 100_000,
              value_parser = clap::value_parser!(u64).range(1..))]
        queries: u64,
        /// Seed of the query position stream.
        #[arg(long, default_value_t = 0x5EED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Compute LCP statistics and the entropy-based size estimate for a
    /// text file.
    Stats {
        /// Input text file.
        #[arg(long)]
        input: PathBuf,
        /// Context order k of the empirical entropy.
        #[arg(long, default_value_t = 3)]
        order: u32,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Rebuild every structure for an input and cross-check it against
    /// brute force; accepts a text file or an index file.
    Verify {
        /// Text file, or an index file whose text is recovered from the
        /// index itself.
        #[arg(long)]
        input: PathBuf,
        /// Largest accepted input length.
        #[arg(long = "max-n", default_value_t = 1_000_000)]
        max_n: u64,
        /// Suffix array sample rate of the rebuilt index.
        #[arg(long = "sa-sample-rate", default_value_t = 32,
              value_parser = clap::value_parser!(u32).range(1..))]
        sa_sample_rate: u32,
        /// Emit the report as json or csv instead of plain lines.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Generate synthetic corpora.
    Gen {
        #[command(subcommand)]
        kind: GenCommand,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Uniform random text over a dense alphabet (letters up to sigma 26).
    Random {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=255))]
        sigma: u32,
        #[arg(long)]
        length: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// De Bruijn sequence of the given order, linearized once.
    DeBruijn {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=255))]
        sigma: u32,
        #[arg(long)]
        order: u32,
        #[arg(long)]
        output: PathBuf,
    },
    /// A base file repeated end to end.
    Concat {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        copies: u32,
        #[arg(long)]
        output: PathBuf,
    },
    /// A single repeated symbol.
    Unary {
        #[arg(long)]
        length: u64,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReprArg {
    PlcpPlain,
    PlcpRle,
    PlcpSampled,
    SampledLcp,
}

#[derive(Clone, Copy, ValueEnum)]
enum VectorArg {
    Plain,
    Gap,
    Rle,
}

impl VectorArg {
    fn kind(self) -> BitVectorKind {
        match self {
            VectorArg::Plain => BitVectorKind::Plain,
            VectorArg::Gap => BitVectorKind::Gap,
            VectorArg::Rle => BitVectorKind::Rle,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// 1 for broken or mismatched data, 2 for bad parameters, 3 for plain I/O.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 3,
        Error::EmptyInput
        | Error::ReservedByte { .. }
        | Error::InvalidParameter(_)
        | Error::OracleLimit { .. } => 2,
        Error::BadMagic { .. }
        | Error::BadVersion { .. }
        | Error::ChecksumMismatch
        | Error::UnexpectedEof { .. }
        | Error::MalformedData(_)
        | Error::IndexMismatch => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Build {
            input,
            output,
            sa_sample_rate,
        } => commands::build(&input, &output, sa_sample_rate),
        Command::LcpBuild {
            input,
            output,
            repr,
            param,
            vector,
        } => commands::lcp_build(&input, &output, repr, param.as_deref(), vector),
        Command::Bench {
            input,
            structure,
            queries,
            seed,
            format,
        } => commands::bench(&input, structure.as_deref(), queries, seed, format),
        Command::Stats {
            input,
            order,
            format,
        } => commands::stats(&input, order, format),
        Command::Verify {
            input,
            max_n,
            sa_sample_rate,
            format,
        } => commands::verify(&input, max_n, sa_sample_rate, format),
        Command::Gen { kind } => commands::gen(kind),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
