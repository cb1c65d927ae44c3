use std::path::Path;

use crate::error::{Error, Result};
use crate::signal::SignalMatrix;

/// One or more equally sized grayscale images, one flattened image per row.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageBuffer {
    signal: SignalMatrix,
    width: usize,
    height: usize,
}

impl ImageBuffer {
    pub fn new(signal: SignalMatrix, width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 || signal.samples() != width * height {
            return Err(Error::argument(format!(
                "{}-sample rows do not match a {width}x{height} image",
                signal.samples()
            )));
        }
        if let Some(v) = signal
            .as_matrix()
            .iter()
            .find(|v| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::argument(format!("pixel value {v} outside [0, 1]")));
        }
        Ok(Self {
            signal,
            width,
            height,
        })
    }

    pub fn signal(&self) -> &SignalMatrix {
        &self.signal
    }

    pub fn into_signal(self) -> SignalMatrix {
        self.signal
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }
}

struct Header<'a> {
    rest: &'a [u8],
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        loop {
            match self.rest.first() {
                Some(b) if b.is_ascii_whitespace() => self.rest = &self.rest[1..],
                Some(b'#') => {
                    let end = self
                        .rest
                        .iter()
                        .position(|&b| b == b'\n')
                        .unwrap_or(self.rest.len());
                    self.rest = &self.rest[end..];
                }
                _ => return,
            }
        }
    }

    fn number(&mut self, field: &'static str) -> Result<usize> {
        self.skip_space_and_comments();
        let len = self.rest.iter().take_while(|b| b.is_ascii_digit()).count();
        let text = std::str::from_utf8(&self.rest[..len]).unwrap_or_default();
        let value = text.parse().map_err(|_| Error::UnsupportedFormat {
            field,
            detail: "missing or malformed header number".into(),
        })?;
        self.rest = &self.rest[len..];
        Ok(value)
    }
}

/// Parses a binary (`P5`) PGM with maxval 255; pixel `p` becomes `p / 255`.
pub fn parse_pgm(bytes: &[u8]) -> Result<ImageBuffer> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::UnsupportedFormat {
            field: "magic",
            detail: "expected binary PGM magic \"P5\"".into(),
        });
    }
    let mut header = Header { rest: &bytes[2..] };
    let width = header.number("width")?;
    let height = header.number("height")?;
    let maxval = header.number("maxval")?;
    if maxval != 255 {
        return Err(Error::UnsupportedFormat {
            field: "maxval",
            detail: format!("maxval {maxval}, expected 255"),
        });
    }
    // exactly one whitespace byte separates the header from the raster
    match header.rest.first() {
        Some(b) if b.is_ascii_whitespace() => header.rest = &header.rest[1..],
        _ => {
            return Err(Error::UnsupportedFormat {
                field: "maxval",
                detail: "header not terminated by whitespace".into(),
            })
        }
    }
    let count = width * height;
    if header.rest.len() < count {
        return Err(Error::UnsupportedFormat {
            field: "raster",
            detail: format!("expected {count} pixels, found {}", header.rest.len()),
        });
    }
    let pixels = header.rest[..count].iter().map(|&p| f64::from(p) / 255.0);
    let signal = SignalMatrix::new(nalgebra::DMatrix::from_iterator(1, count, pixels))?;
    ImageBuffer::new(signal, width, height)
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<ImageBuffer> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_pgm(&bytes)
}

pub fn encode_pgm(buffer: &ImageBuffer) -> Result<Vec<u8>> {
    if buffer.signal.channels() != 1 {
        return Err(Error::argument(format!(
            "a PGM file holds one image, buffer has {}",
            buffer.signal.channels()
        )));
    }
    let mut out = format!("P5\n{} {}\n255\n", buffer.width, buffer.height).into_bytes();
    out.extend(
        buffer
            .signal
            .as_matrix()
            .iter()
            .map(|v| (v * 255.0).round().clamp(0.0, 255.0) as u8),
    );
    Ok(out)
}

pub fn write_pgm(path: impl AsRef<Path>, buffer: &ImageBuffer) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_pgm(buffer)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let mut bytes = b"P5\n# a comment\n3 1\n255\n".to_vec();
        bytes.extend([0u8, 255, 51]);
        let img = parse_pgm(&bytes).unwrap();
        assert_eq!((img.width(), img.height()), (3, 1));
        assert_eq!(img.signal().row(0), vec![0.0, 1.0, 0.2]);
    }

    #[test]
    fn rejects_other_formats() {
        let bad_magic = b"P2\n1 1\n255\n\x00";
        assert!(matches!(
            parse_pgm(bad_magic),
            Err(Error::UnsupportedFormat { field: "magic", .. })
        ));
        let bad_max = b"P5\n1 1\n65535\n\x00\x00";
        assert!(matches!(
            parse_pgm(bad_max),
            Err(Error::UnsupportedFormat {
                field: "maxval",
                ..
            })
        ));
        let short = b"P5\n2 2\n255\n\x00";
        assert!(matches!(
            parse_pgm(short),
            Err(Error::UnsupportedFormat {
                field: "raster",
                ..
            })
        ));
    }

    #[test]
    fn encode_emits_header_and_bytes() {
        let s = SignalMatrix::from_rows(&[vec![0.0, 1.0]]).unwrap();
        let img = ImageBuffer::new(s, 2, 1).unwrap();
        assert_eq!(
            encode_pgm(&img).unwrap(),
            b"P5\n2 1\n255\n\x00\xff".to_vec()
        );
    }

    #[test]
    fn dimensions_must_match() {
        let s = SignalMatrix::from_rows(&[vec![0.0, 1.0, 0.5]]).unwrap();
        assert!(ImageBuffer::new(s, 2, 2).is_err());
    }
}
