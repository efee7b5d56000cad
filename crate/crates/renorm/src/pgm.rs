use std::io::Write;

/// An 8-bit greyscale image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub comments: Vec<String>,
    /// Row-major, top row first.
    pub pixels: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PgmError {
    #[error("missing P5 magic")]
    BadMagic,
    #[error("malformed header near byte {0}")]
    Header(usize),
    #[error("maxval {0} unsupported (need 255)")]
    MaxVal(u64),
    #[error("image dimensions {0}x{1} are invalid")]
    Dimensions(u64, u64),
    #[error("expected {expected} pixel bytes, found {found}")]
    Truncated { expected: usize, found: usize },
}

/// Largest accepted pixel count.
pub const PGM_MAX_PIXELS: u64 = 1 << 28;

impl Pgm {
    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "P5")?;
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        write!(w, "{} {}\n255\n", self.width, self.height)?;
        w.write_all(&self.pixels)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut v = Vec::with_capacity(self.pixels.len() + 128);
        self.write_to(&mut v).expect("writing to a Vec");
        v
    }

    /// Parses a binary P5 file with maxval 255. Comments may appear between
    /// header tokens; exactly one whitespace byte separates the maxval from
    /// the raster.
    pub fn parse(bytes: &[u8]) -> Result<Pgm, PgmError> {
        if !bytes.starts_with(b"P5") {
            return Err(PgmError::BadMagic);
        }
        let mut pos = 2;
        let mut comments = Vec::new();
        let mut fields = [0u64; 3];
        for f in &mut fields {
            loop {
                match bytes.get(pos) {
                    Some(b) if b.is_ascii_whitespace() => pos += 1,
                    Some(b'#') => {
                        let end = bytes[pos..].iter().position(|&b| b == b'\n').map_or(bytes.len(), |i| pos + i);
                        comments.push(String::from_utf8_lossy(&bytes[pos + 1..end]).trim().to_string());
                        pos = end;
                    }
                    _ => break,
                }
            }
            let start = pos;
            while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
                pos += 1;
            }
            if pos == start || pos - start > 12 {
                return Err(PgmError::Header(start));
            }
            *f = std::str::from_utf8(&bytes[start..pos]).unwrap().parse().map_err(|_| PgmError::Header(start))?;
        }
        let [w, h, maxval] = fields;
        if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
            return Err(PgmError::Header(pos));
        }
        pos += 1;
        if maxval != 255 {
            return Err(PgmError::MaxVal(maxval));
        }
        if w == 0 || h == 0 || w.saturating_mul(h) > PGM_MAX_PIXELS {
            return Err(PgmError::Dimensions(w, h));
        }
        let n = (w * h) as usize;
        let data = &bytes[pos..];
        if data.len() < n {
            return Err(PgmError::Truncated { expected: n, found: data.len() });
        }
        Ok(Pgm { width: w as usize, height: h as usize, comments, pixels: data[..n].to_vec() })
    }

    pub fn get(&self, col: usize, row: usize) -> u8 {
        self.pixels[row * self.width + col]
    }
}
