//! Portable graymap reading and writing, ASCII (`P2`) and binary (`P5`).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major, top row first.
    pub pixels: Vec<u16>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, maxval: u16, pixels: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Parse(format!("empty image {width}×{height}")));
        }
        if maxval == 0 {
            return Err(Error::Parse("maxval must be positive".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::Size {
                left: pixels.len(),
                right: width * height,
            });
        }
        if let Some(p) = pixels.iter().find(|&&p| p > maxval) {
            return Err(Error::Parse(format!("pixel value {p} exceeds maxval {maxval}")));
        }
        Ok(Self {
            width,
            height,
            maxval,
            pixels,
        })
    }

    /// Black on the left fading linearly to white on the right.
    pub fn horizontal_gradient(width: usize, height: usize) -> Self {
        let maxval = 255u16;
        let pixels = (0..height)
            .flat_map(|_| (0..width).map(move |i| ((i as f64 + 0.5) / width as f64 * maxval as f64).round() as u16))
            .collect();
        Self::new(width, height, maxval, pixels).expect("valid gradient")
    }

    pub fn get(&self, col: usize, row: usize) -> u16 {
        self.pixels[row * self.width + col]
    }

    pub fn to_ascii(&self) -> String {
        let mut out = format!("P2\n{} {}\n{}\n", self.width, self.height, self.maxval);
        for row in self.pixels.chunks(self.width) {
            let line: Vec<String> = row.iter().map(u16::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n{}\n", self.width, self.height, self.maxval).into_bytes();
        for &p in &self.pixels {
            if self.maxval < 256 {
                out.push(p as u8);
            } else {
                out.extend_from_slice(&p.to_be_bytes());
            }
        }
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let mut pos = 0;
        let magic = header_token(bytes, &mut pos)?;
        let binary = match magic.as_str() {
            "P2" => false,
            "P5" => true,
            other => return Err(Error::Parse(format!("unsupported magic {other:?}"))),
        };
        let width = header_number(bytes, &mut pos, "width")?;
        let height = header_number(bytes, &mut pos, "height")?;
        let maxval = header_number(bytes, &mut pos, "maxval")?;
        if maxval == 0 || maxval > 65535 {
            return Err(Error::Parse(format!("maxval {maxval} outside 1..=65535")));
        }
        let count = width
            .checked_mul(height)
            .ok_or_else(|| Error::Parse("image dimensions overflow".into()))?;
        let pixels = if binary {
            // exactly one whitespace byte separates the header from the raster
            if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
                return Err(Error::Parse("missing raster separator".into()));
            }
            pos += 1;
            let wide = maxval > 255;
            let need = count * if wide { 2 } else { 1 };
            let raster = bytes
                .get(pos..pos + need)
                .ok_or_else(|| Error::Parse(format!("short raster: need {need} bytes, have {}", bytes.len() - pos)))?;
            if wide {
                raster.chunks_exact(2).map(|b| u16::from_be_bytes([b[0], b[1]])).collect()
            } else {
                raster.iter().map(|&b| b as u16).collect()
            }
        } else {
            let mut pixels = Vec::with_capacity(count);
            for _ in 0..count {
                let v = header_number(bytes, &mut pos, "pixel")?;
                pixels.push(u16::try_from(v).map_err(|_| Error::Parse(format!("pixel value {v} too large")))?);
            }
            pixels
        };
        Self::new(width, height, maxval as u16, pixels)
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read(path)?)
    }
}

fn header_token(bytes: &[u8], pos: &mut usize) -> Result<String> {
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
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() && bytes[*pos] != b'#' {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Parse("unexpected end of header".into()));
    }
    Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
}

fn header_number(bytes: &[u8], pos: &mut usize, what: &str) -> Result<usize> {
    let token = header_token(bytes, pos)?;
    token
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what} {token:?}")))
}
