//! Binary PGM (P5) and PPM (P6) with maxval 255.
//!
//! The reader accepts any whitespace and `#` comments in the header. The
//! writer always emits the canonical header `P5\n<w> <h>\n255\n`, so a
//! canonical file survives a load/store cycle byte for byte.

use std::path::Path;

use super::{clamp_quantize, ChannelSet, Mask, PixelGrid};
use crate::error::{Error, Result};

pub fn load_image(path: impl AsRef<Path>) -> Result<ChannelSet> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes, path)
}

/// Quantizes (clamp + round) and writes P5 for one channel, P6 for three.
pub fn store_image(path: impl AsRef<Path>, image: &ChannelSet) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode(image)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Masks are stored as P5: 255 = available, 0 = missing.
pub fn load_mask(path: impl AsRef<Path>) -> Result<Mask> {
    let path = path.as_ref();
    let set = load_image(path)?;
    if set.is_color() {
        return Err(Error::Format {
            path: path.to_path_buf(),
            field: "magic",
            reason: "mask must be a grayscale (P5) image".into(),
        });
    }
    Ok(Mask::from_grid(&set.channels()[0]))
}

pub fn store_mask(path: impl AsRef<Path>, mask: &Mask) -> Result<()> {
    store_image(path, &ChannelSet::gray(mask.to_grid()))
}

pub fn encode(image: &ChannelSet) -> Result<Vec<u8>> {
    let (h, w) = image.dims();
    let quantized = image
        .channels()
        .iter()
        .map(clamp_quantize)
        .collect::<Result<Vec<_>>>()?;
    let magic = if image.is_color() { "P6" } else { "P5" };
    let mut out = format!("{magic}\n{w} {h}\n255\n").into_bytes();
    out.reserve(h * w * quantized.len());
    for i in 0..h * w {
        for ch in &quantized {
            out.push(ch.values()[i] as u8);
        }
    }
    Ok(out)
}

pub fn decode(bytes: &[u8], path: &Path) -> Result<ChannelSet> {
    let fail = |field: &'static str, reason: String| Error::Format {
        path: path.to_path_buf(),
        field,
        reason,
    };

    let channels = match bytes.get(..2) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        Some(other) => {
            return Err(fail(
                "magic",
                format!("expected P5 or P6, found {:?}", String::from_utf8_lossy(other)),
            ))
        }
        None => return Err(fail("magic", "file too short".into())),
    };

    let mut header = HeaderReader { bytes, pos: 2 };
    let width = header.number().map_err(|r| fail("width", r))?;
    let height = header.number().map_err(|r| fail("height", r))?;
    let maxval = header.number().map_err(|r| fail("maxval", r))?;
    if maxval != 255 {
        return Err(fail("maxval", format!("{maxval} (only 255 is supported)")));
    }
    if width == 0 || height == 0 {
        return Err(fail("width", format!("empty image {width}x{height}")));
    }
    // exactly one whitespace byte separates maxval from the raster
    match bytes.get(header.pos) {
        Some(b) if b.is_ascii_whitespace() => header.pos += 1,
        _ => return Err(fail("maxval", "missing whitespace before raster".into())),
    }

    let expected = width * height * channels;
    let raster = &bytes[header.pos..];
    if raster.len() < expected {
        return Err(fail(
            "payload",
            format!("truncated: {} of {expected} bytes", raster.len()),
        ));
    }

    let mut grids: Vec<Vec<f64>> = vec![Vec::with_capacity(width * height); channels];
    for px in raster[..expected].chunks_exact(channels) {
        for (grid, &b) in grids.iter_mut().zip(px) {
            grid.push(f64::from(b));
        }
    }
    let grids = grids
        .into_iter()
        .map(|v| PixelGrid::new(height, width, v))
        .collect::<Result<Vec<_>>>()?;
    super::merge_channels(grids)
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderReader<'_> {
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

    fn number(&mut self) -> std::result::Result<usize, String> {
        let before = self.pos;
        self.skip_space_and_comments();
        if self.pos == before {
            return Err("expected whitespace before field".into());
        }
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.bytes.get(self.pos) {
                Some(&b) => Err(format!("unexpected byte {:?}", b as char)),
                None => Err("unexpected end of header".into()),
            };
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| "number out of range".to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bytes: &[u8]) -> Result<ChannelSet> {
        decode(bytes, Path::new("test.pgm"))
    }

    #[test]
    fn decodes_p5() {
        let mut f = b"P5\n2 2\n255\n".to_vec();
        f.extend_from_slice(&[0, 128, 255, 7]);
        let set = p(&f).unwrap();
        assert!(!set.is_color());
        let g = &set.channels()[0];
        assert_eq!(g.dims(), (2, 2));
        assert_eq!(g.values(), &[0.0, 128.0, 255.0, 7.0]);
        assert_eq!(encode(&set).unwrap(), f);
    }

    #[test]
    fn decodes_p6() {
        let mut f = b"P6\n1 1\n255\n".to_vec();
        f.extend_from_slice(&[10, 20, 30]);
        let set = p(&f).unwrap();
        assert!(set.is_color());
        let v: Vec<f64> = set.channels().iter().map(|g| g.get(0, 0)).collect();
        assert_eq!(v, vec![10.0, 20.0, 30.0]);
        assert_eq!(encode(&set).unwrap(), f);
    }

    #[test]
    fn accepts_comments_and_odd_whitespace() {
        let mut f = b"P5 # made by hand\n# another\n 3\t1\r\n255 ".to_vec();
        f.extend_from_slice(&[1, 2, 3]);
        let g = p(&f).unwrap().channels()[0].clone();
        assert_eq!(g.dims(), (1, 3));
        assert_eq!(g.values(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn rectangular_is_row_major() {
        let mut f = b"P5\n3 2\n255\n".to_vec();
        f.extend_from_slice(&[1, 2, 3, 4, 5, 6]);
        let g = p(&f).unwrap().channels()[0].clone();
        assert_eq!(g.dims(), (2, 3));
        assert_eq!(g.get(1, 0), 4.0);
    }

    fn field_of(err: Error) -> &'static str {
        match err {
            Error::Format { field, .. } => field,
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_files() {
        assert_eq!(field_of(p(b"P2\n1 1\n255\n0").unwrap_err()), "magic");
        assert_eq!(field_of(p(b"P").unwrap_err()), "magic");
        assert_eq!(field_of(p(b"P5\nx 1\n255\n\0").unwrap_err()), "width");
        assert_eq!(field_of(p(b"P5\n1\n").unwrap_err()), "height");
        assert_eq!(field_of(p(b"P5\n1 1\n65535\n\0\0").unwrap_err()), "maxval");
        assert_eq!(field_of(p(b"P5\n2 2\n255\n\0\0\0").unwrap_err()), "payload");
        assert_eq!(field_of(p(b"P5\n0 2\n255\n").unwrap_err()), "width");
    }

    #[test]
    fn error_message_names_field_and_path() {
        let msg = p(b"P5\n1 1\n16\n\0").unwrap_err().to_string();
        assert!(msg.contains("test.pgm"), "{msg}");
        assert!(msg.contains("maxval"), "{msg}");
    }

    #[test]
    fn store_quantizes() {
        let g = PixelGrid::new(1, 3, vec![-5.0, 127.5, 300.0]).unwrap();
        let bytes = encode(&ChannelSet::gray(g)).unwrap();
        assert_eq!(&bytes[bytes.len() - 3..], &[0, 128, 255]);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.ppm");
        let mut f = b"P6\n2 1\n255\n".to_vec();
        f.extend_from_slice(&[1, 2, 3, 4, 5, 6]);
        std::fs::write(&path, &f).unwrap();
        let set = load_image(&path).unwrap();
        let out = dir.path().join("b.ppm");
        store_image(&out, &set).unwrap();
        assert_eq!(std::fs::read(&out).unwrap(), f);

        let m = Mask::from_fn(2, 2, |r, c| r == c);
        let mp = dir.path().join("m.pgm");
        store_mask(&mp, &m).unwrap();
        assert_eq!(load_mask(&mp).unwrap(), m);
        assert!(load_mask(&path).is_err());
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_image("/nonexistent/dir/x.pgm").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
