//! Portable graymap (PGM) reading and writing, binary `P5` and ASCII `P2`.
//!
//! The writer is canonical: header `P5\n<w> <h>\n255\n` (or `P2`), no
//! comments, and for `P2` one image row per line with space-separated
//! samples. The reader accepts `#` comments and arbitrary whitespace in the
//! header. Samples are stored as read; a `maxval` below 255 is not rescaled.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::GrayImage;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum PgmVariant {
    /// Raw octets (`P5`).
    #[default]
    Binary,
    /// Decimal text (`P2`).
    Ascii,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
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

    /// Next decimal token, or `None` at end of input.
    fn number(&mut self, what: &str) -> Result<Option<u32>> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.bytes.get(self.pos) {
                None => Ok(None),
                Some(&b) => Err(Error::CorruptFile(format!(
                    "unexpected byte 0x{b:02x} while reading {what}"
                ))),
            };
        }
        if self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            return Err(Error::CorruptFile(format!("malformed {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map(Some)
            .ok_or_else(|| Error::CorruptFile(format!("{what} out of range")))
    }

    fn required(&mut self, what: &str) -> Result<u32> {
        self.number(what)?
            .ok_or_else(|| Error::CorruptFile(format!("missing {what}")))
    }
}

/// Decodes a `P5` or `P2` graymap.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let variant = match bytes.get(..2) {
        Some(b"P5") => PgmVariant::Binary,
        Some(b"P2") => PgmVariant::Ascii,
        Some(m) => {
            return Err(Error::UnsupportedFormat(format!(
                "magic {:?}",
                String::from_utf8_lossy(m)
            )))
        }
        None => return Err(Error::UnsupportedFormat("file too short".into())),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    if cur
        .bytes
        .get(2)
        .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
    {
        return Err(Error::UnsupportedFormat("malformed magic".into()));
    }
    let width = cur.required("width")? as usize;
    let height = cur.required("height")? as usize;
    let maxval = cur.required("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::CorruptFile(format!(
            "invalid dimensions {width}x{height}"
        )));
    }
    if maxval > 255 {
        return Err(Error::UnsupportedDepth(maxval));
    }
    if maxval == 0 {
        return Err(Error::CorruptFile("maxval is zero".into()));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::CorruptFile("dimensions overflow".into()))?;

    let pixels = match variant {
        PgmVariant::Binary => {
            // Exactly one whitespace octet separates maxval from the raster.
            match cur.bytes.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                _ => return Err(Error::CorruptFile("missing raster separator".into())),
            }
            let raster = cur
                .bytes
                .get(cur.pos..cur.pos.saturating_add(count))
                .ok_or_else(|| {
                    Error::CorruptFile(format!("raster truncated, expected {count} octets"))
                })?;
            if let Some(&v) = raster.iter().find(|&&v| v as u32 > maxval) {
                return Err(Error::CorruptFile(format!(
                    "sample {v} exceeds maxval {maxval}"
                )));
            }
            raster.to_vec()
        }
        PgmVariant::Ascii => {
            let mut pixels = Vec::with_capacity(count);
            for i in 0..count {
                let v = cur.number("sample")?.ok_or_else(|| {
                    Error::CorruptFile(format!("raster truncated after {i} of {count} samples"))
                })?;
                if v > maxval {
                    return Err(Error::CorruptFile(format!(
                        "sample {v} exceeds maxval {maxval}"
                    )));
                }
                pixels.push(v as u8);
            }
            pixels
        }
    };
    GrayImage::from_raw(width, height, pixels)
}

/// Encodes `image` canonically.
pub fn write_pgm(image: &GrayImage, variant: PgmVariant) -> Vec<u8> {
    let (w, h) = (image.width(), image.height());
    match variant {
        PgmVariant::Binary => {
            let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
            out.extend_from_slice(image.pixels());
            out
        }
        PgmVariant::Ascii => {
            let mut out = format!("P2\n{w} {h}\n255\n");
            for row in image.pixels().chunks(w) {
                for (i, v) in row.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    write!(out, "{v}").unwrap();
                }
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}

/// I/O failures are reported separately from format errors.
#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format {
        path: String,
        #[source]
        source: Error,
    },
}

pub fn load(path: impl AsRef<Path>) -> std::result::Result<GrayImage, FileError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_pgm(&bytes).map_err(|source| FileError::Format {
        path: path.display().to_string(),
        source,
    })
}

pub fn save(
    path: impl AsRef<Path>,
    image: &GrayImage,
    variant: PgmVariant,
) -> std::result::Result<(), FileError> {
    let path = path.as_ref();
    fs::write(path, write_pgm(image, variant)).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}
