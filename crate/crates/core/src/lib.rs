//! Compressed text indexing built around a function-Ψ compressed suffix array,
//! with longest-common-prefix machinery layered on top:
//!
//! * [`textstore`] — terminator-completed symbol sequences over dense alphabets,
//!   plus deterministic generators (random, de Bruijn, repeated-copy).
//! * [`oracle`] — brute-force reference implementations used for differential
//!   testing; everything else in the crate is checked against these.
//! * [`bitcodec`] — bit vectors (plain, gap-coded, run-length-coded) with
//!   rank/select, Elias-delta streams, and fixed-width integer vectors.
//! * [`suffixcore`] — linear-time suffix array construction plus the classic
//!   text-order LCP algorithms, used as the fast construction route.
//! * [`csa`] — the compressed suffix array itself: run-length BWT, Ψ/LF,
//!   backward search, locate/display, serialization.
//! * [`lcpbuild`] — streaming PLCP construction directly from the index,
//!   classification of minimal/maximal PLCP values, and construction of the
//!   sampled LCP array without materializing full intermediate arrays.
//! * [`plcprepr`] — permuted-LCP representations: the 2n-bit select-based
//!   encoding (plain and run-length-coded) and the text-order sampled variant.
//! * [`sampledlcp`] — the suffix-order sampled LCP array with Ψ-walk access.
//! * [`analysis`] — statistics over the LCP structure (run counts, minimal and
//!   maximal sums), empirical entropy, and entropy-based size estimates.
//! * [`bench`] — deterministic query benchmarking harness.
//! * [`verify`] — bundled self-checks that cross-validate all of the above on
//!   a given input.
//!
//! # Index conventions
//!
//! All public interfaces use 1-based positions: text positions run over
//! `1..=n` (position `n` holds the terminator), suffix array positions over
//! `1..=n`, and bit vector positions over `1..=m`. `rank1(pos)` counts ones in
//! positions `1..=pos`, and `select1(k)` returns the 1-based position of the
//! k-th one. Internal storage is ordinary 0-based `Vec`s; the shift happens at
//! the accessor boundary.

pub mod analysis;
pub mod bench;
pub mod bitcodec;
pub mod csa;
pub mod error;
pub mod lcpbuild;
pub mod oracle;
pub mod plcprepr;
pub mod sampledlcp;
pub mod serialize;
pub mod suffixcore;
pub mod textstore;
pub mod verify;

pub use error::{Error, Result};
pub use textstore::{AlphabetMap, Indexable, SentinelConcat, Text};
