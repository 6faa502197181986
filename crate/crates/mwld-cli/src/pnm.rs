//! Binary netpbm codecs: P6 portable pixmaps and P5 portable graymaps,
//! maxval 255 only. Readers accept comments and arbitrary whitespace in the
//! header; writers emit the canonical form `P6\n<w> <h>\n255\n<payload>`.

use mwld_core::{GrayImage, RgbFrame};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PnmError {
    #[error("bad magic number {found:?}, expected {expected:?}")]
    BadMagic { expected: &'static str, found: String },
    #[error("unexpected end of data at offset {offset} while reading {expected}")]
    Eof { offset: usize, expected: &'static str },
    #[error("invalid {expected} at offset {offset}")]
    BadToken { offset: usize, expected: &'static str },
    #[error("zero image dimension at offset {offset}")]
    ZeroDimension { offset: usize },
    #[error("unsupported depth: maxval {maxval} at offset {offset}, only 255 is supported")]
    UnsupportedDepth { maxval: u64, offset: usize },
    #[error("truncated payload at offset {offset}: need {needed} bytes, found {available}")]
    TruncatedPayload { offset: usize, needed: usize, available: usize },
    #[error("{trailing} trailing bytes after the payload at offset {offset}")]
    TrailingBytes { offset: usize, trailing: usize },
}

struct Header {
    width: usize,
    height: usize,
    payload_offset: usize,
}

/// Decodes a binary P6 pixmap.
pub fn read_ppm(bytes: &[u8]) -> Result<RgbFrame, PnmError> {
    let header = parse_header(bytes, "P6")?;
    let data = take_payload(bytes, &header, 3)?;
    Ok(RgbFrame::from_raw(header.width, header.height, data.to_vec()))
}

/// Decodes a binary P5 graymap.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage, PnmError> {
    let header = parse_header(bytes, "P5")?;
    let data = take_payload(bytes, &header, 1)?;
    Ok(GrayImage::from_raw(header.width, header.height, data.to_vec()))
}

/// Encodes the canonical binary P6 form.
pub fn write_ppm(frame: &RgbFrame) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", frame.width(), frame.height()).into_bytes();
    out.extend_from_slice(frame.data());
    out
}

/// Encodes the canonical binary P5 form.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.data());
    out
}

fn parse_header(bytes: &[u8], magic: &'static str) -> Result<Header, PnmError> {
    if bytes.len() < 2 {
        return Err(PnmError::Eof { offset: bytes.len(), expected: "magic number" });
    }
    if &bytes[..2] != magic.as_bytes() {
        return Err(PnmError::BadMagic {
            expected: magic,
            found: String::from_utf8_lossy(&bytes[..2]).into_owned(),
        });
    }
    let mut pos = 2;
    let width = read_number(bytes, &mut pos, "width")?;
    let height = read_number(bytes, &mut pos, "height")?;
    let maxval_offset = {
        skip_separators(bytes, &mut pos);
        pos
    };
    let maxval = read_number_at(bytes, &mut pos, "maxval")?;
    if maxval != 255 {
        return Err(PnmError::UnsupportedDepth { maxval, offset: maxval_offset });
    }
    // exactly one whitespace byte separates the maxval from the payload
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        Some(_) => return Err(PnmError::BadToken { offset: pos, expected: "whitespace before payload" }),
        None => return Err(PnmError::Eof { offset: pos, expected: "payload" }),
    }
    if width == 0 || height == 0 {
        return Err(PnmError::ZeroDimension { offset: 2 });
    }
    Ok(Header { width: width as usize, height: height as usize, payload_offset: pos })
}

fn take_payload<'a>(
    bytes: &'a [u8],
    header: &Header,
    channels: usize,
) -> Result<&'a [u8], PnmError> {
    let needed = header
        .width
        .checked_mul(header.height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or(PnmError::BadToken { offset: 2, expected: "representable dimensions" })?;
    let available = bytes.len() - header.payload_offset;
    if available < needed {
        return Err(PnmError::TruncatedPayload {
            offset: header.payload_offset,
            needed,
            available,
        });
    }
    if available > needed {
        return Err(PnmError::TrailingBytes {
            offset: header.payload_offset + needed,
            trailing: available - needed,
        });
    }
    Ok(&bytes[header.payload_offset..header.payload_offset + needed])
}

/// Skips whitespace and `#` comments (which run to the end of the line).
fn skip_separators(bytes: &[u8], pos: &mut usize) {
    loop {
        while bytes.get(*pos).is_some_and(u8::is_ascii_whitespace) {
            *pos += 1;
        }
        if bytes.get(*pos) == Some(&b'#') {
            while bytes.get(*pos).is_some_and(|&b| b != b'\n') {
                *pos += 1;
            }
        } else {
            return;
        }
    }
}

fn read_number(bytes: &[u8], pos: &mut usize, expected: &'static str) -> Result<u64, PnmError> {
    skip_separators(bytes, pos);
    read_number_at(bytes, pos, expected)
}

fn read_number_at(bytes: &[u8], pos: &mut usize, expected: &'static str) -> Result<u64, PnmError> {
    let start = *pos;
    while bytes.get(*pos).is_some_and(u8::is_ascii_digit) {
        *pos += 1;
    }
    if *pos == start {
        return match bytes.get(start) {
            Some(_) => Err(PnmError::BadToken { offset: start, expected }),
            None => Err(PnmError::Eof { offset: start, expected }),
        };
    }
    std::str::from_utf8(&bytes[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or(PnmError::BadToken { offset: start, expected })
}
