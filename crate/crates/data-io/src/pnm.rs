//! Binary PGM (P5) and PPM (P6) images.
//!
//! An image maps to a `rows x cols x channels` tensor with samples divided
//! by maxval. Export multiplies back and rounds half up.

use std::fs;
use std::path::Path;

use tensor_core::Tensor3;

use crate::error::{DataError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PnmKind {
    /// Grayscale, `P5`.
    Pgm,
    /// RGB, `P6`.
    Ppm,
}

impl PnmKind {
    fn channels(self) -> usize {
        match self {
            PnmKind::Pgm => 1,
            PnmKind::Ppm => 3,
        }
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(DataError::format(start, format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| DataError::format(start, format!("{what} out of range")))
    }
}

/// Parses a binary PGM or PPM image, returning the scaled tensor and its maxval.
pub fn decode_pnm(bytes: &[u8]) -> Result<(Tensor3, u32, PnmKind)> {
    let kind = match bytes.get(..2) {
        Some(b"P5") => PnmKind::Pgm,
        Some(b"P6") => PnmKind::Ppm,
        Some(b"P2") | Some(b"P3") => {
            return Err(DataError::format(0, "ASCII PNM variants are not supported"))
        }
        _ => return Err(DataError::format(0, "not a binary PGM/PPM file")),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    if !bytes.get(2).is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return Err(DataError::format(2, "missing whitespace after magic"));
    }
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let max_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(DataError::format(2, "zero image dimension"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(DataError::format(max_at, format!("maxval {maxval} outside 1..=65535")));
    }
    if !bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(DataError::format(cur.pos, "missing whitespace before raster"));
    }
    let start = cur.pos + 1;
    let ch = kind.channels();
    let width_bytes = if maxval < 256 { 1 } else { 2 };
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(ch * width_bytes))
        .ok_or_else(|| DataError::format(2, "image too large"))?;
    let raster = &bytes[start..];
    if raster.len() < expected {
        return Err(DataError::format(bytes.len(), "truncated raster"));
    }
    if raster.len() > expected {
        return Err(DataError::format(start + expected, "trailing bytes after raster"));
    }
    let scale = maxval as f64;
    let mut bad = None;
    let t = Tensor3::from_fn([height, width, ch], |r, c, k| {
        let s = (r * width + c) * ch + k;
        let v = if width_bytes == 1 {
            raster[s] as usize
        } else {
            u16::from_be_bytes([raster[2 * s], raster[2 * s + 1]]) as usize
        };
        if v > maxval && bad.is_none() {
            bad = Some(start + s * width_bytes);
        }
        v as f64 / scale
    });
    if let Some(at) = bad {
        return Err(DataError::format(at, "sample exceeds maxval"));
    }
    Ok((t, maxval as u32, kind))
}

/// Serializes a `rows x cols x 1` tensor as P5 or a `rows x cols x 3` tensor as P6.
pub fn encode_pnm(t: &Tensor3, maxval: u32) -> Result<Vec<u8>> {
    let [rows, cols, ch] = t.dims();
    let magic = match ch {
        1 => "P5",
        3 => "P6",
        _ => {
            return Err(DataError::Config(format!(
                "images need 1 or 3 channels, tensor has {ch}"
            )))
        }
    };
    if maxval == 0 || maxval > 65535 {
        return Err(DataError::Config(format!("maxval {maxval} outside 1..=65535")));
    }
    let mut out = format!("{magic}\n{cols} {rows}\n{maxval}\n").into_bytes();
    let m = maxval as f64;
    for r in 0..rows {
        for c in 0..cols {
            for k in 0..ch {
                let q = (t.get(r, c, k) * m + 0.5).floor().clamp(0.0, m) as u32;
                if maxval < 256 {
                    out.push(q as u8);
                } else {
                    out.extend_from_slice(&(q as u16).to_be_bytes());
                }
            }
        }
    }
    Ok(out)
}

pub fn import_image(path: impl AsRef<Path>) -> Result<Tensor3> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| DataError::io(path, e))?;
    Ok(decode_pnm(&bytes)?.0)
}

pub fn export_image(path: impl AsRef<Path>, t: &Tensor3, maxval: u32) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_pnm(t, maxval)?;
    fs::write(path, bytes).map_err(|e| DataError::io(path, e))
}

/// Stacks the `.pgm` frames of a directory, in file-name order, along mode 3.
pub fn read_video_dir(dir: impl AsRef<Path>) -> Result<Tensor3> {
    let dir = dir.as_ref();
    let mut files: Vec<_> = fs::read_dir(dir)
        .map_err(|e| DataError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .is_some_and(|x| x.eq_ignore_ascii_case("pgm"))
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(DataError::Config(format!("no .pgm frames in {}", dir.display())));
    }
    let mut frames = Vec::with_capacity(files.len());
    for f in &files {
        let bytes = fs::read(f).map_err(|e| DataError::io(f, e))?;
        let (t, _, kind) = decode_pnm(&bytes)?;
        if kind != PnmKind::Pgm {
            return Err(DataError::Config(format!("{} is not grayscale", f.display())));
        }
        frames.push(t);
    }
    let [rows, cols, _] = frames[0].dims();
    if let Some(f) = frames.iter().position(|t| t.dims() != [rows, cols, 1]) {
        return Err(DataError::Config(format!(
            "frame {} has a different size",
            files[f].display()
        )));
    }
    Ok(Tensor3::from_fn([rows, cols, frames.len()], |i, j, k| frames[k].get(i, j, 0)))
}

/// Writes each frontal slice as `frame_00000.pgm`, `frame_00001.pgm`, ...
pub fn write_video_dir(dir: impl AsRef<Path>, t: &Tensor3, maxval: u32) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| DataError::io(dir, e))?;
    let [rows, cols, frames] = t.dims();
    for k in 0..frames {
        let frame = Tensor3::from_fn([rows, cols, 1], |i, j, _| t.get(i, j, k));
        export_image(dir.join(format!("frame_{k:05}.pgm")), &frame, maxval)?;
    }
    Ok(())
}
