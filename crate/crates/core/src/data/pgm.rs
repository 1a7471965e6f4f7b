//! Binary PGM (P5, 8-bit) image files.

use std::fs;
use std::path::Path;

use super::{Image, Space};
use crate::{Error, Result};

/// Write a unit-space image as an 8-bit binary PGM.
pub fn save_pgm(img: &Image, path: &Path) -> Result<()> {
    img.expect_space(Space::Unit, "save_pgm");
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(
        img.values()
            .iter()
            .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8),
    );
    fs::write(path, out)?;
    Ok(())
}

/// Read an 8-bit binary PGM into a unit-space image.
pub fn load_pgm(path: &Path) -> Result<Image> {
    let bytes = fs::read(path)?;
    parse_pgm(&bytes)
}

fn parse_pgm(bytes: &[u8]) -> Result<Image> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::parse(0, "expected PGM magic \"P5\""));
    }
    let mut pos = 2;
    let width = read_ascii_int(bytes, &mut pos)?;
    let height = read_ascii_int(bytes, &mut pos)?;
    let maxval = read_ascii_int(bytes, &mut pos)?;
    if maxval != 255 {
        return Err(Error::parse(pos, format!("unsupported maxval {maxval}, expected 255")));
    }
    // Single whitespace byte separates header from payload.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::parse(pos, "expected whitespace before payload"));
    }
    pos += 1;
    let expected = width * height;
    let payload = &bytes[pos..];
    if payload.len() < expected {
        return Err(Error::parse(
            pos + payload.len(),
            format!("truncated payload: expected {expected} bytes, got {}", payload.len()),
        ));
    }
    let values = payload[..expected]
        .iter()
        .map(|&b| b as f64 / 255.0)
        .collect();
    Ok(Image::from_vec(height, width, values, Space::Unit))
}

/// Parse an ASCII integer, skipping leading whitespace and `#` comments.
fn read_ascii_int(bytes: &[u8], pos: &mut usize) -> Result<usize> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == start {
        return Err(Error::parse(start, "expected ASCII integer in header"));
    }
    std::str::from_utf8(&bytes[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse(start, "invalid integer in header"))
}
