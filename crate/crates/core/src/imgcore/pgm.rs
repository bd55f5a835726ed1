//! PGM (P5 binary / P2 ASCII) reading and writing, maxval <= 255,
//! bit-exact round trips.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::GrayImage;
use crate::{Error, Result};

/// Load a P5 or P2 PGM file. Pixel values are taken verbatim; no scaling.
pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() < 2 {
        return Err(Error::pgm(path, "file too short for a PGM header"));
    }
    let magic = &bytes[..2];
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        _ => return Err(Error::pgm(path, "missing P5/P2 magic number")),
    };

    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        *field = read_header_int(&bytes, &mut pos)
            .ok_or_else(|| Error::pgm(path, "truncated or non-numeric header"))?;
    }
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(Error::pgm(path, "zero image dimension"));
    }
    if maxval > 255 {
        return Err(Error::pgm(path, format!("unsupported maxval {maxval}")));
    }
    if maxval == 0 {
        return Err(Error::pgm(path, "maxval must be positive"));
    }
    let n = width * height;

    let data = if binary {
        // Exactly one whitespace byte separates the header from the payload.
        if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
            return Err(Error::pgm(path, "missing separator before pixel data"));
        }
        pos += 1;
        let payload = &bytes[pos..];
        if payload.len() < n {
            return Err(Error::pgm(
                path,
                format!("truncated payload: expected {n} bytes, found {}", payload.len()),
            ));
        }
        payload[..n].to_vec()
    } else {
        let mut data = Vec::with_capacity(n);
        while data.len() < n {
            let v = read_header_int(&bytes, &mut pos)
                .ok_or_else(|| Error::pgm(path, "truncated ASCII payload"))?;
            if v > 255 {
                return Err(Error::pgm(path, format!("pixel value {v} exceeds 255")));
            }
            data.push(v as u8);
        }
        data
    };

    GrayImage::new(width, height, data)
}

/// Write a binary (P5) PGM. `load_pgm(save_pgm(img)) == img` bit-exactly.
pub fn save_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = Vec::with_capacity(img.pixels().len() + 32);
    write!(out, "P5\n{} {}\n255\n", img.width(), img.height()).expect("vec write");
    out.extend_from_slice(img.pixels());
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Read the next whitespace-delimited integer, skipping `#` comments.
fn read_header_int(bytes: &[u8], pos: &mut usize) -> Option<usize> {
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
        return None;
    }
    std::str::from_utf8(&bytes[start..*pos]).ok()?.parse().ok()
}
