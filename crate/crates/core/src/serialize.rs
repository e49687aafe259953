//! Little-endian byte buffers and checksummed index container files.
//!
//! Container layout: 4-byte magic, u16 format version, payload length,
//! payload, then a SHA-256 digest over everything before it. The digest of
//! an index file doubles as the index content hash that dependent structure
//! files embed, so mismatched pairings fail fast on load.

use crate::error::{Error, Result};
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: u16 = 1;
/// Magic for self-contained index files.
pub const INDEX_MAGIC: &str = "SLCP";
/// Magic for auxiliary structure files tied to an index.
pub const STRUCT_MAGIC: &str = "SLCS";

/// Structure payload tag for a sampled LCP array.
pub const STRUCT_TAG_SAMPLED_LCP: u8 = 1;
/// Structure payload tag for a permuted-LCP representation.
pub const STRUCT_TAG_PLCP: u8 = 2;

/// Growable little-endian byte sink.
#[derive(Debug, Default)]
pub struct ByteWriter {
    bytes: Vec<u8>,
}

impl ByteWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    pub fn put_u8(&mut self, v: u8) {
        self.bytes.push(v);
    }

    pub fn put_u16(&mut self, v: u16) {
        self.bytes.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_u32(&mut self, v: u32) {
        self.bytes.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_u64(&mut self, v: u64) {
        self.bytes.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_f64(&mut self, v: f64) {
        self.bytes.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_bytes(&mut self, v: &[u8]) {
        self.bytes.extend_from_slice(v);
    }

    /// Length-prefixed byte slice.
    pub fn put_byte_vec(&mut self, v: &[u8]) {
        self.put_u64(v.len() as u64);
        self.put_bytes(v);
    }

    /// Length-prefixed u64 slice.
    pub fn put_u64_slice(&mut self, v: &[u64]) {
        self.put_u64(v.len() as u64);
        for &x in v {
            self.put_u64(x);
        }
    }

    /// Length-prefixed u32 slice.
    pub fn put_u32_slice(&mut self, v: &[u32]) {
        self.put_u64(v.len() as u64);
        for &x in v {
            self.put_u32(x);
        }
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}

/// Sequential little-endian reader with explicit end-of-input errors.
#[derive(Debug)]
pub struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        ByteReader { bytes, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    pub fn is_at_end(&self) -> bool {
        self.pos == self.bytes.len()
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(Error::UnexpectedEof { offset: self.pos });
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub fn get_u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn get_u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    pub fn get_u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn get_u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn get_f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn get_bytes(&mut self, n: usize) -> Result<&'a [u8]> {
        self.take(n)
    }

    pub fn get_byte_vec(&mut self) -> Result<Vec<u8>> {
        let n = self.checked_len()?;
        Ok(self.take(n)?.to_vec())
    }

    pub fn get_u64_vec(&mut self) -> Result<Vec<u64>> {
        let n = self.checked_len()?;
        if self.remaining() < n.saturating_mul(8) {
            return Err(Error::UnexpectedEof { offset: self.pos });
        }
        (0..n).map(|_| self.get_u64()).collect()
    }

    pub fn get_u32_vec(&mut self) -> Result<Vec<u32>> {
        let n = self.checked_len()?;
        if self.remaining() < n.saturating_mul(4) {
            return Err(Error::UnexpectedEof { offset: self.pos });
        }
        (0..n).map(|_| self.get_u32()).collect()
    }

    fn checked_len(&mut self) -> Result<usize> {
        let n = self.get_u64()?;
        if n > self.bytes.len() as u64 {
            return Err(Error::MalformedData(format!(
                "stored length {n} exceeds file size {}",
                self.bytes.len()
            )));
        }
        Ok(n as usize)
    }
}

pub fn sha256(bytes: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().into()
}

/// Wraps a payload into a checksummed container and returns the file bytes
/// together with the digest (the payload's content hash).
pub fn seal_container(magic: &str, payload: &[u8]) -> (Vec<u8>, [u8; 32]) {
    debug_assert_eq!(magic.len(), 4);
    let mut w = ByteWriter::new();
    w.put_bytes(magic.as_bytes());
    w.put_u16(FORMAT_VERSION);
    w.put_u64(payload.len() as u64);
    w.put_bytes(payload);
    let mut bytes = w.into_bytes();
    let digest = sha256(&bytes);
    bytes.extend_from_slice(&digest);
    (bytes, digest)
}

/// Verifies magic, version and checksum, returning the payload slice and the
/// digest.
pub fn open_container<'a>(magic: &'static str, bytes: &'a [u8]) -> Result<(&'a [u8], [u8; 32])> {
    debug_assert_eq!(magic.len(), 4);
    let mut r = ByteReader::new(bytes);
    let found = r.get_bytes(4)?;
    if found != magic.as_bytes() {
        return Err(Error::BadMagic { expected: magic });
    }
    let version = r.get_u16()?;
    if version != FORMAT_VERSION {
        return Err(Error::BadVersion {
            found: version as u32,
            supported: FORMAT_VERSION as u32,
        });
    }
    let len = r.get_u64()? as usize;
    if r.remaining() != len + 32 {
        return Err(Error::UnexpectedEof { offset: r.pos() });
    }
    let payload = r.get_bytes(len)?;
    let digest: [u8; 32] = r.get_bytes(32)?.try_into().unwrap();
    if sha256(&bytes[..bytes.len() - 32]) != digest {
        return Err(Error::ChecksumMismatch);
    }
    Ok((payload, digest))
}

/// Reads the structure tag of a structure file without deserializing the
/// body, so callers can dispatch to the right loader.
pub fn peek_struct_tag(bytes: &[u8]) -> Result<u8> {
    let (payload, _) = open_container(STRUCT_MAGIC, bytes)?;
    let mut r = ByteReader::new(payload);
    r.get_bytes(32)?;
    r.get_u8()
}
