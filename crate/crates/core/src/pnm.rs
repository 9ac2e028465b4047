//! Netpbm grayscale/color ingestion and grayscale emission.
//!
//! Accepts P2/P5 (graymap) and P3/P6 (pixmap) with a maxval of exactly 255.
//! Pixmaps are reduced to luminance with [`to_gray`]. Header fields may be
//! separated by any whitespace and interleaved with `#` comments; binary
//! payloads start after the single whitespace byte that follows maxval.

use std::fmt::Write as _;

use thiserror::Error;

use crate::image::{to_gray, GrayImage};

/// Every decoding failure carries the byte offset where it was detected.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PnmError {
    #[error("byte {offset}: unrecognised magic number {found:?}, expected P2, P3, P5 or P6")]
    BadMagic { offset: usize, found: String },
    #[error("byte {offset}: unexpected end of data while reading {what}")]
    UnexpectedEof { offset: usize, what: &'static str },
    #[error("byte {offset}: expected a decimal number for {what}, found {found:?}")]
    InvalidNumber {
        offset: usize,
        what: &'static str,
        found: char,
    },
    #[error("byte {offset}: {what} does not fit in 32 bits")]
    NumberTooLarge { offset: usize, what: &'static str },
    #[error("byte {offset}: maxval {maxval} unsupported, only 255 is accepted")]
    UnsupportedMaxval { offset: usize, maxval: u32 },
    #[error("byte {offset}: image dimensions must be positive, got {width}x{height}")]
    ZeroDimension {
        offset: usize,
        width: u32,
        height: u32,
    },
    #[error("byte {offset}: dimensions {width}x{height} overflow the addressable size")]
    DimensionOverflow {
        offset: usize,
        width: u32,
        height: u32,
    },
    #[error("byte {offset}: expected a whitespace byte after maxval")]
    MissingSeparator { offset: usize },
    #[error(
        "byte {offset}: pixel data truncated, need {expected} bytes but only {available} remain"
    )]
    Truncated {
        offset: usize,
        expected: usize,
        available: usize,
    },
    #[error("byte {offset}: sample value {value} exceeds maxval 255")]
    SampleOutOfRange { offset: usize, value: u32 },
}

/// Output encodings supported by [`write_pnm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnmFormat {
    /// Plain (ASCII) graymap.
    P2,
    /// Raw (binary) graymap.
    P5,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Gray,
    Rgb,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &'static str) -> Result<u32, PnmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        let first = *self.bytes.get(start).ok_or(PnmError::UnexpectedEof {
            offset: start,
            what,
        })?;
        if !first.is_ascii_digit() {
            return Err(PnmError::InvalidNumber {
                offset: start,
                what,
                found: char::from(first),
            });
        }
        let mut value: u32 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u32::from(b - b'0')))
                .ok_or(PnmError::NumberTooLarge {
                    offset: start,
                    what,
                })?;
            self.pos += 1;
        }
        Ok(value)
    }
}

/// Decodes a PGM/PPM byte stream into a grayscale image.
pub fn read_pnm(bytes: &[u8]) -> Result<GrayImage, PnmError> {
    let (plain, kind) = match bytes.get(..2) {
        Some(b"P2") => (true, Kind::Gray),
        Some(b"P3") => (true, Kind::Rgb),
        Some(b"P5") => (false, Kind::Gray),
        Some(b"P6") => (false, Kind::Rgb),
        other => {
            return Err(PnmError::BadMagic {
                offset: 0,
                found: String::from_utf8_lossy(other.unwrap_or(bytes)).into_owned(),
            })
        }
    };
    let mut cur = Cursor { bytes, pos: 2 };

    let dims_offset = cur.pos;
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    if width == 0 || height == 0 {
        return Err(PnmError::ZeroDimension {
            offset: dims_offset,
            width,
            height,
        });
    }
    let channels = if kind == Kind::Rgb { 3 } else { 1 };
    let overflow = PnmError::DimensionOverflow {
        offset: dims_offset,
        width,
        height,
    };
    let pixel_count = (width as usize)
        .checked_mul(height as usize)
        .ok_or_else(|| overflow.clone())?;
    let sample_count = pixel_count.checked_mul(channels).ok_or(overflow)?;

    let maxval_offset = {
        cur.skip_whitespace_and_comments();
        cur.pos
    };
    let maxval = cur.number("maxval")?;
    if maxval != 255 {
        return Err(PnmError::UnsupportedMaxval {
            offset: maxval_offset,
            maxval,
        });
    }

    let samples: Vec<u8> = if plain {
        let mut out = Vec::with_capacity(sample_count.min(bytes.len()));
        for _ in 0..sample_count {
            cur.skip_whitespace_and_comments();
            let at = cur.pos;
            let v = cur.number("sample")?;
            if v > 255 {
                return Err(PnmError::SampleOutOfRange {
                    offset: at,
                    value: v,
                });
            }
            out.push(v as u8);
        }
        out
    } else {
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            Some(_) => return Err(PnmError::MissingSeparator { offset: cur.pos }),
            None => {
                return Err(PnmError::UnexpectedEof {
                    offset: cur.pos,
                    what: "separator after maxval",
                })
            }
        }
        let available = bytes.len() - cur.pos;
        if available < sample_count {
            return Err(PnmError::Truncated {
                offset: cur.pos,
                expected: sample_count,
                available,
            });
        }
        bytes[cur.pos..cur.pos + sample_count].to_vec()
    };

    let pixels = match kind {
        Kind::Gray => samples,
        Kind::Rgb => samples
            .chunks_exact(3)
            .map(|px| to_gray(px[0], px[1], px[2]))
            .collect(),
    };
    Ok(GrayImage::new(width as usize, height as usize, pixels)
        .expect("dimensions validated during header parse"))
}

/// Encodes `img` as a graymap with maxval 255.
///
/// Plain output wraps lines before 70 characters, per the netpbm convention.
pub fn write_pnm(img: &GrayImage, format: PnmFormat) -> Vec<u8> {
    let magic = match format {
        PnmFormat::P2 => "P2",
        PnmFormat::P5 => "P5",
    };
    let header = format!("{magic}\n{} {}\n255\n", img.width(), img.height());
    match format {
        PnmFormat::P5 => {
            let mut out = Vec::with_capacity(header.len() + img.len());
            out.extend_from_slice(header.as_bytes());
            out.extend_from_slice(img.pixels());
            out
        }
        PnmFormat::P2 => {
            let mut text = header;
            for row in img.pixels().chunks(img.width()) {
                let mut line_len = 0;
                for (i, v) in row.iter().enumerate() {
                    // at most 3 digits plus a separator
                    if i > 0 && line_len + 4 > 70 {
                        text.push('\n');
                        line_len = 0;
                    } else if i > 0 {
                        text.push(' ');
                        line_len += 1;
                    }
                    let before = text.len();
                    write!(text, "{v}").expect("writing to a String cannot fail");
                    line_len += text.len() - before;
                }
                text.push('\n');
            }
            text.into_bytes()
        }
    }
}
