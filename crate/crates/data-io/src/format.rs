//! Binary container for dense tensors and masks.
//!
//! Layout: 8 magic bytes, three little-endian `u64` dims, then the payload
//! with the first index fastest. Tensor payloads are little-endian `f64`,
//! mask payloads are one byte per entry holding 0 or 1.

use std::fs;
use std::path::Path;

use tensor_core::Tensor3;

use crate::error::{DataError, Result};
use crate::mask::ObservationMask;

pub const TENSOR_MAGIC: &[u8; 8] = b"T3DENSE1";
pub const MASK_MAGIC: &[u8; 8] = b"T3MASK01";

const HEADER: usize = 8 + 3 * 8;

fn encode_header(magic: &[u8; 8], dims: [usize; 3], payload: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER + payload);
    out.extend_from_slice(magic);
    for d in dims {
        out.extend_from_slice(&(d as u64).to_le_bytes());
    }
    out
}

/// Checks magic and dims, returning dims and the entry count.
fn decode_header(bytes: &[u8], magic: &[u8; 8], width: usize) -> Result<([usize; 3], usize)> {
    if bytes.len() < 8 {
        return Err(DataError::format(bytes.len(), "truncated magic"));
    }
    if &bytes[..8] != magic {
        return Err(DataError::format(
            0,
            format!(
                "bad magic {:?}, expected {:?}",
                String::from_utf8_lossy(&bytes[..8]),
                String::from_utf8_lossy(magic)
            ),
        ));
    }
    let mut dims = [0usize; 3];
    for (a, d) in dims.iter_mut().enumerate() {
        let at = 8 + 8 * a;
        let raw = bytes
            .get(at..at + 8)
            .ok_or_else(|| DataError::format(bytes.len(), "truncated header"))?;
        let v = u64::from_le_bytes(raw.try_into().unwrap());
        if v == 0 {
            return Err(DataError::format(at, "zero dimension"));
        }
        *d = usize::try_from(v).map_err(|_| DataError::format(at, "dimension too large"))?;
    }
    let n = dims[0]
        .checked_mul(dims[1])
        .and_then(|n| n.checked_mul(dims[2]))
        .filter(|n| n.checked_mul(width).is_some())
        .ok_or_else(|| DataError::format(8, "dims overflow"))?;
    let expected = HEADER + n * width;
    if bytes.len() < expected {
        return Err(DataError::format(
            bytes.len(),
            format!("truncated payload: {} of {} bytes", bytes.len(), expected),
        ));
    }
    if bytes.len() > expected {
        return Err(DataError::format(
            expected,
            format!("{} trailing bytes", bytes.len() - expected),
        ));
    }
    Ok((dims, n))
}

pub fn encode_tensor(t: &Tensor3) -> Vec<u8> {
    let mut out = encode_header(TENSOR_MAGIC, t.dims(), 8 * t.len());
    for v in t.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_tensor(bytes: &[u8]) -> Result<Tensor3> {
    let (dims, n) = decode_header(bytes, TENSOR_MAGIC, 8)?;
    let mut data = Vec::with_capacity(n);
    for (e, chunk) in bytes[HEADER..].chunks_exact(8).enumerate() {
        let v = f64::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(DataError::format(HEADER + 8 * e, format!("non-finite value {v}")));
        }
        data.push(v);
    }
    Ok(Tensor3::from_vec(dims, data)?)
}

pub fn encode_mask(m: &ObservationMask) -> Vec<u8> {
    let mut out = encode_header(MASK_MAGIC, m.dims(), m.len());
    out.extend(m.flags().iter().map(|&b| b as u8));
    out
}

pub fn decode_mask(bytes: &[u8]) -> Result<ObservationMask> {
    let (dims, _) = decode_header(bytes, MASK_MAGIC, 1)?;
    let mut flags = Vec::with_capacity(bytes.len() - HEADER);
    for (e, &b) in bytes[HEADER..].iter().enumerate() {
        match b {
            0 => flags.push(false),
            1 => flags.push(true),
            _ => return Err(DataError::format(HEADER + e, format!("mask byte {b} is not 0 or 1"))),
        }
    }
    ObservationMask::new(dims, flags)
}

fn read_all(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| DataError::io(path, e))
}

fn write_all(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| DataError::io(path, e))
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<Tensor3> {
    decode_tensor(&read_all(path.as_ref())?)
}

pub fn write_tensor(path: impl AsRef<Path>, t: &Tensor3) -> Result<()> {
    write_all(path.as_ref(), &encode_tensor(t))
}

pub fn read_mask(path: impl AsRef<Path>) -> Result<ObservationMask> {
    decode_mask(&read_all(path.as_ref())?)
}

pub fn write_mask(path: impl AsRef<Path>, m: &ObservationMask) -> Result<()> {
    write_all(path.as_ref(), &encode_mask(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offset_of(e: DataError) -> u64 {
        match e {
            DataError::Format { offset, .. } => offset,
            other => panic!("expected a format error, got {other}"),
        }
    }

    #[test]
    fn header_layout() {
        let t = Tensor3::from_fn([1, 2, 1], |_, j, _| j as f64 + 0.5);
        let b = encode_tensor(&t);
        assert_eq!(&b[..8], b"T3DENSE1");
        assert_eq!(&b[8..16], &1u64.to_le_bytes());
        assert_eq!(&b[16..24], &2u64.to_le_bytes());
        assert_eq!(&b[32..40], &0.5f64.to_le_bytes());
        assert_eq!(&b[40..48], &1.5f64.to_le_bytes());
        assert_eq!(b.len(), 48);
    }

    #[test]
    fn rejects_with_offsets() {
        let t = Tensor3::from_fn([2, 2, 2], |i, j, k| (i + j + k) as f64);
        let good = encode_tensor(&t);

        let mut bad = good.clone();
        bad[0] = b'X';
        assert_eq!(offset_of(decode_tensor(&bad).unwrap_err()), 0);

        assert_eq!(offset_of(decode_tensor(&good[..good.len() - 3]).unwrap_err()), good.len() as u64 - 3);

        let mut long = good.clone();
        long.push(0);
        assert_eq!(offset_of(decode_tensor(&long).unwrap_err()), good.len() as u64);

        let mut nan = good.clone();
        nan[HEADER + 16..HEADER + 24].copy_from_slice(&f64::NAN.to_le_bytes());
        assert_eq!(offset_of(decode_tensor(&nan).unwrap_err()), (HEADER + 16) as u64);

        let mut zero = good.clone();
        zero[16..24].copy_from_slice(&0u64.to_le_bytes());
        assert_eq!(offset_of(decode_tensor(&zero).unwrap_err()), 16);

        assert!(decode_mask(&good).is_err());
    }

    #[test]
    fn mask_bytes_checked() {
        let m = ObservationMask::from_fn([2, 1, 2], |i, _, k| i == k);
        let mut b = encode_mask(&m);
        assert_eq!(&b[HEADER..], &[1, 0, 0, 1]);
        assert_eq!(decode_mask(&b).unwrap(), m);
        b[HEADER + 2] = 7;
        assert_eq!(offset_of(decode_mask(&b).unwrap_err()), (HEADER + 2) as u64);
    }
}
