//! Grayscale PGM in binary (`P5`) and ASCII (`P2`) form.

use crate::error::{Error, Result};

use super::GrayImage;

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() && self.bytes[self.pos] != b'#'
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        let tok = self.token().ok_or_else(|| Error::PgmHeader(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| Error::PgmHeader(format!("{what} is not a non-negative integer: {:?}", String::from_utf8_lossy(tok))))
    }
}

pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let magic = bytes.get(..2).unwrap_or(bytes);
    let ascii = match magic {
        b"P5" => false,
        b"P2" => true,
        _ => return Err(Error::PgmBadMagic(String::from_utf8_lossy(magic).into_owned())),
    };
    let mut h = Header { bytes, pos: 2 };
    let width = h.number("width")? as usize;
    let height = h.number("height")? as usize;
    let maxval = h.number("maxval")?;
    if maxval > 255 {
        return Err(Error::PgmMaxvalTooLarge(maxval));
    }
    if maxval == 0 {
        return Err(Error::PgmHeader("maxval must be positive".into()));
    }
    let expected = width * height;

    let pixels = if ascii {
        let mut pixels = Vec::with_capacity(expected);
        while pixels.len() < expected {
            let Some(tok) = h.token() else { break };
            let v = std::str::from_utf8(tok)
                .ok()
                .and_then(|s| s.parse::<u32>().ok())
                .ok_or_else(|| Error::PgmHeader(format!("bad sample {:?}", String::from_utf8_lossy(tok))))?;
            if v > maxval {
                return Err(Error::PgmHeader(format!("sample {v} exceeds maxval {maxval}")));
            }
            pixels.push(v as u8);
        }
        if pixels.len() < expected {
            return Err(Error::PgmTruncated { expected, actual: pixels.len() });
        }
        pixels
    } else {
        // exactly one whitespace byte separates maxval from the raster
        match bytes.get(h.pos) {
            Some(c) if c.is_ascii_whitespace() => h.pos += 1,
            Some(_) => return Err(Error::PgmHeader("missing whitespace after maxval".into())),
            None => return Err(Error::PgmTruncated { expected, actual: 0 }),
        }
        let raster = &bytes[h.pos..];
        if raster.len() < expected {
            return Err(Error::PgmTruncated { expected, actual: raster.len() });
        }
        let pixels = raster[..expected].to_vec();
        if let Some(v) = pixels.iter().find(|&&v| v as u32 > maxval) {
            return Err(Error::PgmHeader(format!("sample {v} exceeds maxval {maxval}")));
        }
        pixels
    };
    Ok(GrayImage { width, height, maxval: maxval as u8, pixels })
}

/// Binary `P5` encoding; the inverse of [`parse_pgm`] for binary input.
pub fn write_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", image.width, image.height, image.maxval).into_bytes();
    out.extend_from_slice(&image.pixels);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_ascii() {
        let img = parse_pgm(b"P2 2 1 255 0 255").unwrap();
        assert_eq!((img.width, img.height), (2, 1));
        assert_eq!(img.pixels, vec![0, 255]);
    }

    #[test]
    fn binary_with_comments() {
        let mut bytes = b"P5\n# created by hand\n2 2 # trailing\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 10, 200, 255]);
        let img = parse_pgm(&bytes).unwrap();
        assert_eq!((img.width, img.height, img.maxval), (2, 2, 255));
        assert_eq!(img.pixels, vec![0, 10, 200, 255]);
        assert_eq!(parse_pgm(&write_pgm(&img)).unwrap(), img);
    }

    #[test]
    fn binary_payload_may_start_with_whitespace_bytes() {
        let mut bytes = b"P5 3 1 255\n".to_vec();
        bytes.extend_from_slice(&[b' ', b'\n', 7]);
        assert_eq!(parse_pgm(&bytes).unwrap().pixels, vec![32, 10, 7]);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_pgm(b"P6 1 1 255 \x00\x00\x00"), Err(Error::PgmBadMagic(m)) if m == "P6"));
        assert!(matches!(parse_pgm(b""), Err(Error::PgmBadMagic(_))));
        assert!(matches!(parse_pgm(b"P2 1 1 65535 7"), Err(Error::PgmMaxvalTooLarge(65535))));
        assert!(matches!(
            parse_pgm(b"P5 2 2 255\n\x01\x02"),
            Err(Error::PgmTruncated { expected: 4, actual: 2 })
        ));
        assert!(matches!(parse_pgm(b"P2 2 2 255 1 2 3"), Err(Error::PgmTruncated { expected: 4, actual: 3 })));
        assert!(matches!(parse_pgm(b"P2 2 x 255"), Err(Error::PgmHeader(_))));
        assert!(matches!(parse_pgm(b"P2 1 1 15 16"), Err(Error::PgmHeader(_))));
    }
}
