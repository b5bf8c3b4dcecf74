//! Grayscale images, binary PGM (P5) encoding and comparison metrics.

use crate::error::{Error, Result};

/// Row-major grayscale image with intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyRequest("image must have at least one pixel"));
        }
        if data.len() != width * height {
            return Err(Error::shape(width * height, data.len()));
        }
        if data.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::EmptyRequest("intensities must lie in [0, 1]"));
        }
        Ok(Self { width, height, data })
    }

    /// Builds an image from `f(tx, ty)`, clamping the values into `[0, 1]`.
    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for ty in 0..height {
            for tx in 0..width {
                data.push(f(tx, ty).clamp(0.0, 1.0));
            }
        }
        Self { width, height, data }
    }

    pub fn from_bytes(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != width * height {
            return Err(Error::shape(width * height, bytes.len()));
        }
        Self::new(width, height, bytes.iter().map(|&b| b as f64 / 255.0).collect())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, tx: usize, ty: usize) -> f64 {
        self.data[ty * self.width + tx]
    }

    pub fn row(&self, ty: usize) -> &[f64] {
        &self.data[ty * self.width..(ty + 1) * self.width]
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Byte quantization: `floor(255 v + 1/2)` clamped to `0..=255`.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.data.iter().map(|&v| quantize(v)).collect()
    }
}

#[inline]
pub fn quantize(v: f64) -> u8 {
    (v * 255.0 + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Parses a binary PGM (P5) with `maxval <= 255`.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::BadMagic);
    }
    let mut pos = 2;
    let mut fields = [0u32; 3];
    for (i, field) in fields.iter_mut().enumerate() {
        // Whitespace and comments before each field.
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(Error::BadHeader("unexpected end of header".into())),
            }
        }
        if i == 0 && pos == 2 {
            return Err(Error::BadMagic);
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(Error::BadHeader(format!("expected a number at byte {start}")));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("ascii digits");
        *field = text
            .parse()
            .map_err(|_| Error::BadHeader(format!("number out of range: {text}")))?;
    }
    let [width, height, maxval] = fields;
    if maxval == 0 || maxval > 255 {
        return Err(Error::BadMaxval(maxval));
    }
    if width == 0 || height == 0 {
        return Err(Error::BadHeader(format!("empty image {width}x{height}")));
    }
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::BadHeader("missing whitespace after maxval".into())),
    }
    let (width, height) = (width as usize, height as usize);
    let expected = width * height;
    let payload = &bytes[pos..];
    if payload.len() < expected {
        return Err(Error::Truncated {
            expected,
            found: payload.len(),
        });
    }
    let mut data = Vec::with_capacity(expected);
    for &b in &payload[..expected] {
        if b as u32 > maxval {
            return Err(Error::SampleOutOfRange { sample: b, maxval });
        }
        data.push(b as f64 / maxval as f64);
    }
    GrayImage::new(width, height, data)
}

/// Encodes as `P5\n<w> <h>\n255\n` followed by the quantized bytes.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend(img.to_bytes());
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageMetrics {
    pub max_abs: f64,
    pub rmse: f64,
    /// `20 log10(1 / rmse)`; `+inf` for identical images.
    pub psnr: f64,
}

pub fn image_metrics(a: &GrayImage, b: &GrayImage) -> Result<ImageMetrics> {
    if (a.width, a.height) != (b.width, b.height) {
        return Err(Error::shape(
            format!("{}x{}", a.width, a.height),
            format!("{}x{}", b.width, b.height),
        ));
    }
    let mut max_abs = 0.0f64;
    let mut sq = 0.0;
    for (x, y) in a.data.iter().zip(&b.data) {
        let d = (x - y).abs();
        max_abs = max_abs.max(d);
        sq += d * d;
    }
    let rmse = (sq / a.data.len() as f64).sqrt();
    let psnr = if rmse == 0.0 {
        f64::INFINITY
    } else {
        20.0 * (1.0 / rmse).log10()
    };
    Ok(ImageMetrics { max_abs, rmse, psnr })
}
