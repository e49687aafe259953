//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by text loading, generation, construction, and
/// serialization.
#[derive(Debug, Error)]
pub enum Error {
    /// Input text is empty.
    #[error("input text is empty")]
    EmptyInput,

    /// The reserved terminator byte occurs inside the input.
    #[error("reserved terminator byte 0x{byte:02x} found at input offset {offset}")]
    ReservedByte { byte: u8, offset: usize },

    /// A generator or builder parameter is out of its accepted range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Requested input exceeds the configured brute-force oracle limit.
    #[error("oracle limit exceeded: n = {n} > limit = {limit}")]
    OracleLimit { n: usize, limit: usize },

    /// A serialized file has the wrong magic bytes.
    #[error("bad magic bytes: expected {expected:?}")]
    BadMagic { expected: &'static str },

    /// A serialized file has an unsupported format version.
    #[error("unsupported format version {found} (supported: {supported})")]
    BadVersion { found: u32, supported: u32 },

    /// A serialized file fails its checksum.
    #[error("checksum mismatch: file is corrupted or truncated")]
    ChecksumMismatch,

    /// A serialized file ends before its declared payload.
    #[error("unexpected end of serialized data at offset {offset}")]
    UnexpectedEof { offset: usize },

    /// A serialized field holds a value that violates the format contract.
    #[error("malformed serialized data: {0}")]
    MalformedData(String),

    /// A structure file references a different index than the one loaded.
    #[error("structure/index mismatch: structure was built for a different index (content hash differs)")]
    IndexMismatch,

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
