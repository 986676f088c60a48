//! FMAT: a minimal little-endian container for feature matrices.
//!
//! Layout: `b"FMAT"`, `u32` version (1), `u64` rows, `u32` cols, then
//! `rows · cols` IEEE-754 `f32` values in row-major order.

use std::fs;
use std::path::Path;

use super::FeatureMatrix;
use crate::error::{Error, Result};

pub const FMAT_MAGIC: [u8; 4] = *b"FMAT";
pub const FMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 8 + 4;

pub fn encode_fmat(m: &FeatureMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * m.values().len());
    out.extend_from_slice(&FMAT_MAGIC);
    out.extend_from_slice(&FMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(m.rows() as u64).to_le_bytes());
    out.extend_from_slice(&(m.cols() as u32).to_le_bytes());
    for v in m.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_fmat(bytes: &[u8]) -> Result<FeatureMatrix> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "truncated FMAT header: {} bytes, need {HEADER_LEN}",
            bytes.len()
        )));
    }
    if bytes[..4] != FMAT_MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected \"FMAT\"",
            String::from_utf8_lossy(&bytes[..4])
        )));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != FMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported FMAT version {version}, expected {FMAT_VERSION}"
        )));
    }
    let rows = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let cols = u32::from_le_bytes(bytes[16..20].try_into().unwrap()) as u64;
    let expected = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(4))
        .ok_or_else(|| Error::Format(format!("FMAT header overflows: {rows}x{cols}")))?;
    let payload = &bytes[HEADER_LEN..];
    if (payload.len() as u64) < expected {
        return Err(Error::Format(format!(
            "truncated FMAT payload: header declares {rows}x{cols} ({expected} bytes), found {}",
            payload.len()
        )));
    }
    if payload.len() as u64 > expected {
        return Err(Error::Format(format!(
            "FMAT payload has {} trailing bytes",
            payload.len() as u64 - expected
        )));
    }
    let values = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    FeatureMatrix::new(rows as usize, cols as usize, values)
}

pub fn save_fmat(m: &FeatureMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_fmat(m)).map_err(|e| Error::io(path, e))
}

pub fn load_fmat(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_fmat(&bytes)
}
