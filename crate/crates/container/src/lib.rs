//! Versioned binary container framing shared by the dataset, sample-set and
//! parameter-checkpoint file formats.
//!
//! Layout: 4 magic bytes, a `u8` format version, the payload, and a trailing
//! CRC-32 (IEEE) of every preceding byte. Integers are little-endian.

use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ContainerError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },
    #[error("unsupported format version {found} (latest supported: {supported})")]
    UnsupportedVersion { found: u8, supported: u8 },
    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    ChecksumMismatch { stored: u32, computed: u32 },
    #[error("file truncated: need {needed} bytes, have {available}")]
    Truncated { needed: usize, available: usize },
}

/// CRC-32 (IEEE 802.3, reflected, polynomial 0xEDB88320).
pub fn crc32(bytes: &[u8]) -> u32 {
    let mut crc = !0u32;
    for &b in bytes {
        crc ^= b as u32;
        for _ in 0..8 {
            let mask = (crc & 1).wrapping_neg();
            crc = (crc >> 1) ^ (0xEDB8_8320 & mask);
        }
    }
    !crc
}

/// Frames `payload` with the given magic and version and writes it to `path`.
pub fn write_framed(
    path: &Path,
    magic: [u8; 4],
    version: u8,
    payload: &[u8],
) -> Result<(), ContainerError> {
    let mut bytes = Vec::with_capacity(payload.len() + 9);
    bytes.extend_from_slice(&magic);
    bytes.push(version);
    bytes.extend_from_slice(payload);
    let sum = crc32(&bytes);
    bytes.extend_from_slice(&sum.to_le_bytes());
    fs::write(path, bytes)?;
    Ok(())
}

/// Reads a framed file, checking magic, version and checksum.
/// Returns `(version, payload)`.
pub fn read_framed(
    path: &Path,
    magic: [u8; 4],
    max_version: u8,
) -> Result<(u8, Vec<u8>), ContainerError> {
    let bytes = fs::read(path)?;
    if bytes.len() < 9 {
        return Err(ContainerError::Truncated {
            needed: 9,
            available: bytes.len(),
        });
    }
    let found: [u8; 4] = bytes[0..4].try_into().unwrap();
    if found != magic {
        return Err(ContainerError::BadMagic {
            expected: magic,
            found,
        });
    }
    let version = bytes[4];
    if version == 0 || version > max_version {
        return Err(ContainerError::UnsupportedVersion {
            found: version,
            supported: max_version,
        });
    }
    let body_end = bytes.len() - 4;
    let stored = u32::from_le_bytes(bytes[body_end..].try_into().unwrap());
    let computed = crc32(&bytes[..body_end]);
    if stored != computed {
        return Err(ContainerError::ChecksumMismatch { stored, computed });
    }
    Ok((version, bytes[5..body_end].to_vec()))
}

/// Cursor over a payload for decoding little-endian fields.
pub struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8], ContainerError> {
        if self.remaining() < n {
            return Err(ContainerError::Truncated {
                needed: n,
                available: self.remaining(),
            });
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn u8(&mut self) -> Result<u8, ContainerError> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32, ContainerError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn u64(&mut self) -> Result<u64, ContainerError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn f64(&mut self) -> Result<f64, ContainerError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn string(&mut self) -> Result<String, ContainerError> {
        let len = self.u32()? as usize;
        let raw = self.take(len)?;
        String::from_utf8(raw.to_vec()).map_err(|_| ContainerError::Truncated {
            needed: len,
            available: 0,
        })
    }
}

/// Builder for payloads, mirror of [`Reader`].
#[derive(Default)]
pub struct Writer {
    bytes: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn u8(&mut self, v: u8) {
        self.bytes.push(v);
    }

    pub fn u32(&mut self, v: u32) {
        self.bytes.extend_from_slice(&v.to_le_bytes());
    }

    pub fn u64(&mut self, v: u64) {
        self.bytes.extend_from_slice(&v.to_le_bytes());
    }

    pub fn f64(&mut self, v: f64) {
        self.bytes.extend_from_slice(&v.to_le_bytes());
    }

    pub fn string(&mut self, s: &str) {
        self.u32(s.len() as u32);
        self.bytes.extend_from_slice(s.as_bytes());
    }

    pub fn raw(&mut self, bytes: &[u8]) {
        self.bytes.extend_from_slice(bytes);
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}
