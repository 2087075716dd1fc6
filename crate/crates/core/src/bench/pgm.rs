//! 8-bit grayscale PGM images, ASCII (`P2`) and binary (`P5`).

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major, `height * width` samples.
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::invalid(format!(
                "{} pixels do not fill a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            maxval: 255,
            pixels,
        })
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    /// Pixel scaled to `[0, 1]` by the declared maximum value.
    #[inline]
    pub fn intensity(&self, row: usize, col: usize) -> f64 {
        f64::from(self.at(row, col)) / f64::from(self.maxval)
    }
}

fn bad(message: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        message: message.into(),
    }
}

/// Splits the header into tokens, skipping `#` comments, and returns the
/// tokens with the byte offset right after the last one consumed.
fn header_tokens(bytes: &[u8], count: usize) -> Result<(Vec<String>, usize)> {
    let mut tokens = Vec::new();
    let mut pos = 0;
    while tokens.len() < count {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated PGM header"));
        }
        tokens.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    Ok((tokens, pos))
}

pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let (tokens, mut pos) = header_tokens(bytes, 4)?;
    let num = |s: &str, what: &str| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|_| bad(format!("PGM {what} `{s}` is not an integer")))
    };
    let magic = tokens[0].as_str();
    let width = num(&tokens[1], "width")?;
    let height = num(&tokens[2], "height")?;
    let maxval = num(&tokens[3], "maxval")?;
    if width == 0 || height == 0 {
        return Err(bad("PGM dimensions must be positive"));
    }
    if maxval == 0 || maxval > 255 {
        return Err(bad(format!("only 8-bit PGM is supported (maxval {maxval})")));
    }
    let count = width * height;
    let pixels = match magic {
        "P5" => {
            // exactly one whitespace byte separates the header from the raster
            pos += 1;
            let raster = bytes
                .get(pos..pos + count)
                .ok_or_else(|| bad(format!("P5 raster has fewer than {count} bytes")))?;
            raster.to_vec()
        }
        "P2" => {
            let text = String::from_utf8_lossy(&bytes[pos..]);
            let mut px = Vec::with_capacity(count);
            for tok in text.split_whitespace() {
                if tok.starts_with('#') {
                    return Err(bad("comments are not allowed inside a P2 raster"));
                }
                let v = num(tok, "sample")?;
                if v > maxval {
                    return Err(bad(format!("sample {v} exceeds maxval {maxval}")));
                }
                px.push(v as u8);
            }
            if px.len() != count {
                return Err(bad(format!("P2 raster has {} samples, expected {count}", px.len())));
            }
            px
        }
        other => return Err(bad(format!("unsupported PGM magic `{other}`"))),
    };
    if pixels.iter().any(|&v| usize::from(v) > maxval) {
        return Err(bad(format!("sample exceeds maxval {maxval}")));
    }
    Ok(GrayImage {
        width,
        height,
        maxval: maxval as u16,
        pixels,
    })
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    parse_pgm(&fs::read(path).map_err(|e| Error::io_at(path, e))?)
}

/// Binary `P5` encoding.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", img.width, img.height, img.maxval).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

pub fn save_pgm(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(img)).map_err(|e| Error::io_at(path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_with_comments() {
        let img = parse_pgm(b"P2\n# made by hand\n3 2\n255\n0 1 2\n3 4 255\n").unwrap();
        assert_eq!((img.width, img.height), (3, 2));
        assert_eq!(img.at(1, 2), 255);
        assert_eq!(img.intensity(1, 2), 1.0);
    }

    #[test]
    fn binary_round_trip() {
        let img = GrayImage::new(2, 3, vec![0, 10, 20, 30, 40, 250]).unwrap();
        assert_eq!(parse_pgm(&encode_pgm(&img)).unwrap(), img);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_pgm(b"P6\n1 1\n255\n\0\0\0").is_err());
        assert!(parse_pgm(b"P5\n2 2\n255\n\0\0").is_err());
        assert!(parse_pgm(b"P2\n2 1\n65535\n1 2\n").is_err());
        assert!(parse_pgm(b"P2\n2 1\n255\n1\n").is_err());
        assert!(parse_pgm(b"P2\n2 1\n10\n1 11\n").is_err());
        assert!(parse_pgm(b"P2\n0 1\n255\n").is_err());
    }
}
