//! IMGB: little-endian container for 8-bit image stacks.
//!
//! Layout: `b"IMGB"`, `u32` version (1), `u64` n, `u16` h, `u16` w, `u8` c,
//! then `n · h · w · c` bytes in `n, h, w, c` order.

use std::fs;
use std::path::Path;

use crate::data::ImageSet;
use crate::error::{Error, Result};

pub const IMGB_MAGIC: [u8; 4] = *b"IMGB";
pub const IMGB_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 8 + 2 + 2 + 1;

pub fn encode_imgb(images: &ImageSet) -> Result<Vec<u8>> {
    let (h, w) = (images.height(), images.width());
    if h > u16::MAX as usize || w > u16::MAX as usize {
        return Err(Error::Validation(format!(
            "image size {h}x{w} exceeds the IMGB limit of 65535"
        )));
    }
    let mut out = Vec::with_capacity(HEADER_LEN + images.pixels().len());
    out.extend_from_slice(&IMGB_MAGIC);
    out.extend_from_slice(&IMGB_VERSION.to_le_bytes());
    out.extend_from_slice(&(images.len() as u64).to_le_bytes());
    out.extend_from_slice(&(h as u16).to_le_bytes());
    out.extend_from_slice(&(w as u16).to_le_bytes());
    out.push(images.channels() as u8);
    out.extend_from_slice(images.pixels());
    Ok(out)
}

pub fn decode_imgb(bytes: &[u8]) -> Result<ImageSet> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "truncated IMGB header: {} bytes, need {HEADER_LEN}",
            bytes.len()
        )));
    }
    if bytes[..4] != IMGB_MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected \"IMGB\"",
            String::from_utf8_lossy(&bytes[..4])
        )));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != IMGB_VERSION {
        return Err(Error::Format(format!(
            "unsupported IMGB version {version}, expected {IMGB_VERSION}"
        )));
    }
    let n = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let h = u16::from_le_bytes(bytes[16..18].try_into().unwrap()) as u64;
    let w = u16::from_le_bytes(bytes[18..20].try_into().unwrap()) as u64;
    let c = bytes[20] as u64;
    let expected = n
        .checked_mul(h * w * c)
        .ok_or_else(|| Error::Format("IMGB header overflows".into()))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() as u64 != expected {
        return Err(Error::Format(format!(
            "IMGB payload is {} bytes, header declares {n}x{h}x{w}x{c} = {expected}",
            payload.len()
        )));
    }
    ImageSet::new(n as usize, h as usize, w as usize, c as usize, payload.to_vec())
}

pub fn save_imgb(images: &ImageSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_imgb(images)?).map_err(|e| Error::io(path, e))
}

pub fn load_imgb(path: impl AsRef<Path>) -> Result<ImageSet> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_imgb(&bytes)
}
