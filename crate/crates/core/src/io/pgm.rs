use std::io::Write;
use std::path::Path;

use super::write_with;
use crate::error::{Error, Result};

pub const PGM_MAXVAL: u16 = 65535;

/// Binary 16-bit greyscale (P5, big-endian). `[0, 1]` maps linearly onto
/// `[0, 65535]`; values outside are clamped and NaN is written as 0.
pub fn write_pgm(path: &Path, width: usize, height: usize, pixels: &[f64]) -> Result<()> {
    if pixels.len() != width * height {
        return Err(Error::DimensionMismatch {
            context: "write_pgm",
            expected: width * height,
            found: pixels.len(),
        });
    }
    write_with(path, |w| {
        write!(w, "P5\n{width} {height}\n{PGM_MAXVAL}\n")?;
        let mut buf = Vec::with_capacity(2 * pixels.len());
        for &v in pixels {
            buf.extend_from_slice(&quantize(v).to_be_bytes());
        }
        w.write_all(&buf)
    })
}

fn quantize(v: f64) -> u16 {
    if v.is_nan() {
        return 0;
    }
    (v.clamp(0.0, 1.0) * f64::from(PGM_MAXVAL)).round() as u16
}

/// Reads a P5 image with any maxval, rescaled to `[0, 1]`.
/// Returns `(width, height, pixels)`.
pub fn read_pgm(path: &Path) -> Result<(usize, usize, Vec<f64>)> {
    let data = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let bad = |msg: &str| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: msg.to_string(),
    };

    let mut pos = 0;
    let mut fields = Vec::with_capacity(4);
    while fields.len() < 4 {
        while pos < data.len() {
            if data[pos].is_ascii_whitespace() {
                pos += 1;
            } else if data[pos] == b'#' {
                while pos < data.len() && data[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < data.len() && !data[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated PGM header"));
        }
        fields.push(std::str::from_utf8(&data[start..pos]).map_err(|_| bad("non-ASCII header"))?);
    }
    if fields[0] != "P5" {
        return Err(bad("not a binary PGM (P5) file"));
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| bad("malformed PGM header number"))
    };
    let (width, height, maxval) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
    if maxval == 0 || maxval > 65535 {
        return Err(bad("PGM maxval must lie in 1..=65535"));
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let bytes = if maxval > 255 { 2 } else { 1 };
    let count = width * height;
    let raster = data.get(pos..).unwrap_or(&[]);
    if raster.len() != count * bytes {
        return Err(bad("PGM raster length does not match its header"));
    }
    let scale = maxval as f64;
    let pixels = if bytes == 2 {
        raster
            .chunks_exact(2)
            .map(|c| f64::from(u16::from_be_bytes([c[0], c[1]])) / scale)
            .collect()
    } else {
        raster.iter().map(|&b| f64::from(b) / scale).collect()
    };
    Ok((width, height, pixels))
}
