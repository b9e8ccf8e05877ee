//! Noise reduction and segmentation.
//!
//! Two stages: a separable Gaussian blur, and adaptive mean thresholding where
//! each pixel is compared against the mean of its `block_size` x `block_size`
//! neighborhood minus a constant offset. The neighborhood mean is served from
//! a replicate-padded summed-area table, so the cost is independent of the
//! block size even at the 301-pixel default.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::raster::{BinaryImage, GrayImage};

#[derive(Debug, Error)]
pub enum FilterError {
    #[error("kernel size must be odd and >= 1, got {0}")]
    KernelSize(usize),
    #[error("sigma must be positive, got {0}")]
    Sigma(f64),
    #[error("block size must be odd and >= 3, got {0}")]
    BlockSize(usize),
}

/// Gaussian blur parameters: odd kernel side length and standard deviation in
/// pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlurParams {
    pub ksize: usize,
    pub sigma: f64,
}

impl BlurParams {
    pub fn new(ksize: usize, sigma: f64) -> Result<Self, FilterError> {
        let p = Self { ksize, sigma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), FilterError> {
        if self.ksize == 0 || self.ksize % 2 == 0 {
            return Err(FilterError::KernelSize(self.ksize));
        }
        if !(self.sigma > 0.0) {
            return Err(FilterError::Sigma(self.sigma));
        }
        Ok(())
    }
}

impl Default for BlurParams {
    fn default() -> Self {
        Self { ksize: 5, sigma: 10.0 }
    }
}

/// Adaptive threshold parameters: odd neighborhood side length and the offset
/// subtracted from the local mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdParams {
    pub block_size: usize,
    pub c: f64,
}

impl ThresholdParams {
    pub fn new(block_size: usize, c: f64) -> Result<Self, FilterError> {
        let p = Self { block_size, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), FilterError> {
        if self.block_size < 3 || self.block_size % 2 == 0 {
            return Err(FilterError::BlockSize(self.block_size));
        }
        Ok(())
    }
}

impl Default for ThresholdParams {
    fn default() -> Self {
        Self { block_size: 301, c: 72.0 }
    }
}

/// Normalized 1-D Gaussian taps; the 2-D kernel is their outer product.
pub fn gaussian_kernel(params: &BlurParams) -> Vec<f64> {
    debug_assert!(params.validate().is_ok());
    let half = (params.ksize / 2) as isize;
    let inv_two_sigma2 = 1.0 / (2.0 * params.sigma * params.sigma);
    let mut w: Vec<f64> =
        (-half..=half).map(|d| (-((d * d) as f64) * inv_two_sigma2).exp()).collect();
    let sum: f64 = w.iter().sum();
    for v in w.iter_mut() {
        *v /= sum;
    }
    w
}

/// Separable Gaussian blur with replicate-edge borders.
///
/// The horizontal pass keeps full float precision; rounding to 8 bits happens
/// once after the vertical pass, so the result matches a direct 2-D
/// convolution to within quantization.
pub fn gaussian_blur(img: &GrayImage, params: &BlurParams) -> GrayImage {
    debug_assert!(params.validate().is_ok());
    let kernel = gaussian_kernel(params);
    let half = (params.ksize / 2) as isize;
    let (w, h) = (img.width(), img.height());
    let src = img.pixels();

    let mut mid = vec![0.0f64; w * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        let out = &mut mid[y * w..(y + 1) * w];
        for x in 0..w {
            let mut acc = 0.0;
            for (k, &wt) in kernel.iter().enumerate() {
                let sx = (x as isize + k as isize - half).clamp(0, w as isize - 1) as usize;
                acc += wt * f64::from(row[sx]);
            }
            out[x] = acc;
        }
    }

    let mut dst = vec![0u8; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (k, &wt) in kernel.iter().enumerate() {
                let sy = (y as isize + k as isize - half).clamp(0, h as isize - 1) as usize;
                acc += wt * mid[sy * w + x];
            }
            dst[y * w + x] = acc.round().clamp(0.0, 255.0) as u8;
        }
    }
    GrayImage::new(w, h, dst).expect("source raster is valid")
}

/// Replicate-padded summed-area table serving window means up to a fixed
/// radius. Built once per image, it answers any window size `<= 2*pad + 1`,
/// which lets a parameter sweep reuse one table across block sizes.
pub struct MeanTable {
    width: usize,
    height: usize,
    pad: usize,
    padded_width: usize,
    // cum[(y+1)*(pw+1) + (x+1)] = sum of padded pixels in [0..=x, 0..=y]
    cum: Vec<u64>,
}

impl MeanTable {
    pub fn new(img: &GrayImage, pad: usize) -> Self {
        let (w, h) = (img.width(), img.height());
        let (pw, ph) = (w + 2 * pad, h + 2 * pad);
        let stride = pw + 1;
        let mut cum = vec![0u64; stride * (ph + 1)];
        let src = img.pixels();
        for py in 0..ph {
            let sy = (py as isize - pad as isize).clamp(0, h as isize - 1) as usize;
            let row = &src[sy * w..sy * w + w];
            let mut rowsum = 0u64;
            for px in 0..pw {
                let sx = (px as isize - pad as isize).clamp(0, w as isize - 1) as usize;
                rowsum += u64::from(row[sx]);
                cum[(py + 1) * stride + px + 1] = cum[py * stride + px + 1] + rowsum;
            }
        }
        Self { width: w, height: h, pad, padded_width: pw, cum }
    }

    pub fn max_radius(&self) -> usize {
        self.pad
    }

    /// Mean intensity of the `(2*radius+1)`-square window centered at `(x, y)`
    /// with replicate-edge semantics.
    #[inline]
    pub fn window_mean(&self, x: usize, y: usize, radius: usize) -> f64 {
        debug_assert!(radius <= self.pad && x < self.width && y < self.height);
        let stride = self.padded_width + 1;
        let x0 = x + self.pad - radius;
        let y0 = y + self.pad - radius;
        let x1 = x + self.pad + radius + 1;
        let y1 = y + self.pad + radius + 1;
        let sum = self.cum[y1 * stride + x1] + self.cum[y0 * stride + x0]
            - self.cum[y0 * stride + x1]
            - self.cum[y1 * stride + x0];
        let n = 2 * radius + 1;
        sum as f64 / (n * n) as f64
    }
}

/// Adaptive mean threshold: pixel `(x, y)` is foreground iff
/// `I(x, y) <= mean(window) - c`. Dark grains on light paper therefore come
/// out as foreground.
pub fn adaptive_threshold(img: &GrayImage, params: &ThresholdParams) -> BinaryImage {
    debug_assert!(params.validate().is_ok());
    let table = MeanTable::new(img, params.block_size / 2);
    adaptive_threshold_with(&table, img, params)
}

/// Same as [`adaptive_threshold`] but reusing a prebuilt [`MeanTable`].
pub fn adaptive_threshold_with(
    table: &MeanTable,
    img: &GrayImage,
    params: &ThresholdParams,
) -> BinaryImage {
    debug_assert!(params.validate().is_ok());
    let radius = params.block_size / 2;
    assert!(radius <= table.max_radius(), "MeanTable pad too small for block size");
    let (w, h) = (img.width(), img.height());
    let src = img.pixels();
    let mut dst = vec![0u8; w * h];
    for y in 0..h {
        for x in 0..w {
            let t = table.window_mean(x, y, radius) - params.c;
            dst[y * w + x] = u8::from(f64::from(src[y * w + x]) <= t);
        }
    }
    BinaryImage::new(w, h, dst).expect("source raster is valid")
}
