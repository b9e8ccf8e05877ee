//! Raster value types and image codecs.
//!
//! The pipeline works on three raster layers: the decoded RGB photograph, its
//! grayscale reduction, and the binary segmentation mask. All three are plain
//! row-major buffers validated at construction and immutable afterwards.

use image::{DynamicImage, ImageFormat};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("failed to decode image: {0}")]
    Decode(String),
    #[error("image has zero width or height")]
    Dimension,
    #[error("pixel buffer length {got} does not match {width}x{height}")]
    BufferSize { width: usize, height: usize, got: usize },
}

/// 8-bit RGB photograph, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl ColorImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::Dimension);
        }
        if pixels.len() != width * height {
            return Err(RasterError::BufferSize { width, height, got: pixels.len() });
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }
}

/// 8-bit grayscale raster; 0 is black, 255 is white.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::Dimension);
        }
        if pixels.len() != width * height {
            return Err(RasterError::BufferSize { width, height, got: pixels.len() });
        }
        Ok(Self { width, height, pixels })
    }

    /// Constant-intensity image.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, RasterError> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub(crate) fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }
}

/// Binary segmentation mask; 1 is foreground (particle), 0 is background.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::Dimension);
        }
        if pixels.len() != width * height {
            return Err(RasterError::BufferSize { width, height, got: pixels.len() });
        }
        debug_assert!(pixels.iter().all(|&v| v <= 1));
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn foreground_count(&self) -> u64 {
        self.pixels.iter().map(|&v| u64::from(v)).sum()
    }
}

/// Decode a PNG or JPEG byte stream into an RGB raster.
///
/// The alpha channel, if present, is discarded. 16-bit inputs are rejected
/// rather than silently truncated.
pub fn decode_image(bytes: &[u8]) -> Result<ColorImage, RasterError> {
    let format = image::guess_format(bytes).map_err(|e| RasterError::Decode(e.to_string()))?;
    if !matches!(format, ImageFormat::Png | ImageFormat::Jpeg) {
        return Err(RasterError::Decode(format!("unsupported format {format:?}, expected PNG or JPEG")));
    }
    let dynimg =
        image::load_from_memory_with_format(bytes, format).map_err(|e| RasterError::Decode(e.to_string()))?;
    match dynimg {
        DynamicImage::ImageLuma16(_)
        | DynamicImage::ImageLumaA16(_)
        | DynamicImage::ImageRgb16(_)
        | DynamicImage::ImageRgba16(_) => {
            return Err(RasterError::Decode("16-bit input rejected".into()));
        }
        _ => {}
    }
    let rgb = dynimg.into_rgb8();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    if w == 0 || h == 0 {
        return Err(RasterError::Dimension);
    }
    let pixels = rgb.pixels().map(|p| [p[0], p[1], p[2]]).collect();
    ColorImage::new(w, h, pixels)
}

/// Rec. 601 luma with round-half-up, the grayscale convention of mainstream
/// imaging libraries. `(v,v,v)` maps back to `v` for every `v`.
#[inline]
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    let y = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
    y.round().clamp(0.0, 255.0) as u8
}

/// Grayscale reduction of an RGB raster.
pub fn to_grayscale(img: &ColorImage) -> GrayImage {
    let pixels = img.pixels().iter().map(|&[r, g, b]| luma(r, g, b)).collect();
    GrayImage::new(img.width(), img.height(), pixels).expect("source raster is valid")
}

/// Encode a grayscale raster as PNG bytes.
pub fn encode_png(img: &GrayImage) -> Vec<u8> {
    let buf = image::GrayImage::from_raw(img.width() as u32, img.height() as u32, img.pixels().to_vec())
        .expect("raster invariants hold");
    let mut out = Vec::new();
    let mut cursor = std::io::Cursor::new(&mut out);
    buf.write_to(&mut cursor, ImageFormat::Png).expect("in-memory PNG encoding cannot fail");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn encode_rgb_png(width: u32, height: u32, px: &[[u8; 3]]) -> Vec<u8> {
        let flat: Vec<u8> = px.iter().flatten().copied().collect();
        let buf = image::RgbImage::from_raw(width, height, flat).unwrap();
        let mut out = Vec::new();
        buf.write_to(&mut std::io::Cursor::new(&mut out), ImageFormat::Png).unwrap();
        out
    }

    #[test]
    fn decode_single_white_pixel() {
        let bytes = encode_rgb_png(1, 1, &[[255, 255, 255]]);
        let img = decode_image(&bytes).unwrap();
        assert_eq!((img.width(), img.height()), (1, 1));
        assert_eq!(img.get(0, 0), [255, 255, 255]);
    }

    #[test]
    fn decode_truncated_stream_fails() {
        let mut bytes = encode_rgb_png(8, 8, &[[10, 20, 30]; 64]);
        bytes.truncate(bytes.len() / 2);
        assert!(matches!(decode_image(&bytes), Err(RasterError::Decode(_))));
    }

    #[test]
    fn decode_rejects_non_png_jpeg() {
        let bmp = b"BM          ";
        assert!(matches!(decode_image(bmp), Err(RasterError::Decode(_))));
    }

    #[test]
    fn decode_rejects_16_bit_png() {
        let buf: image::ImageBuffer<image::Luma<u16>, Vec<u16>> =
            image::ImageBuffer::from_pixel(4, 4, image::Luma([40_000u16]));
        let mut out = Vec::new();
        buf.write_to(&mut std::io::Cursor::new(&mut out), ImageFormat::Png).unwrap();
        let err = decode_image(&out).unwrap_err();
        assert!(err.to_string().contains("16-bit"), "{err}");
    }

    #[test]
    fn jpeg_round_trip_preserves_12mp_dimensions() {
        // Same frame size as a 12-megapixel phone photo.
        let (w, h) = (3024u32, 4032u32);
        let mut flat = vec![0u8; (w * h * 3) as usize];
        let mut state = 0x2545F4914F6CDD1Du64;
        for v in flat.iter_mut() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            *v = (state >> 56) as u8;
        }
        let buf = image::RgbImage::from_raw(w, h, flat).unwrap();
        let mut bytes = Vec::new();
        buf.write_to(&mut std::io::Cursor::new(&mut bytes), ImageFormat::Jpeg).unwrap();
        let img = decode_image(&bytes).unwrap();
        assert_eq!((img.width(), img.height()), (3024, 4032));
        assert_eq!(img.pixels().len(), 3024 * 4032);
    }

    #[test]
    fn luma_reference_values() {
        assert_eq!(luma(255, 255, 255), 255);
        assert_eq!(luma(0, 0, 0), 0);
        // 0.299 * 255 = 76.245
        assert_eq!(luma(255, 0, 0), 76);
    }

    #[test]
    fn luma_identity_on_gray_and_monotone_in_channels() {
        for v in 0..=255u8 {
            assert_eq!(luma(v, v, v), v);
        }
        for v in 0..255u8 {
            assert!(luma(v + 1, 0, 0) >= luma(v, 0, 0));
            assert!(luma(0, v + 1, 0) >= luma(0, v, 0));
            assert!(luma(0, 0, v + 1) >= luma(0, 0, v));
        }
    }

    #[test]
    fn zero_sized_rasters_rejected() {
        assert!(matches!(GrayImage::new(0, 4, vec![]), Err(RasterError::Dimension)));
        assert!(matches!(ColorImage::new(4, 0, vec![]), Err(RasterError::Dimension)));
        assert!(matches!(
            GrayImage::new(2, 2, vec![0; 3]),
            Err(RasterError::BufferSize { .. })
        ));
    }
}
