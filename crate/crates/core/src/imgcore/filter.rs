//! Separable Gaussian blur and Sobel gradients with edge replication.

use super::{FloatImage, GrayImage};
use crate::{Error, Result};

/// Discrete Gaussian kernel with radius ceil(3 sigma), normalized to sum 1.
pub(crate) fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as usize;
    let mut kernel = Vec::with_capacity(2 * radius + 1);
    let denom = 2.0 * sigma * sigma;
    for i in -(radius as isize)..=(radius as isize) {
        kernel.push((-(i * i) as f64 / denom).exp());
    }
    let sum: f64 = kernel.iter().sum();
    for k in kernel.iter_mut() {
        *k /= sum;
    }
    kernel
}

/// Separable Gaussian blur; borders replicate edge pixels.
pub fn gaussian_blur(img: &FloatImage, sigma: f64) -> Result<FloatImage> {
    if sigma <= 0.0 {
        return Err(Error::InvalidParam(format!("sigma must be > 0, got {sigma}")));
    }
    let kernel = gaussian_kernel(sigma);
    let radius = (kernel.len() / 2) as isize;
    let (w, h) = (img.width(), img.height());

    // Horizontal pass.
    let mut tmp = FloatImage::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (i, &k) in kernel.iter().enumerate() {
                let sx = x as isize + i as isize - radius;
                acc += k * img.get_clamped(sx, y as isize);
            }
            tmp.set(x, y, acc);
        }
    }
    // Vertical pass.
    let mut out = FloatImage::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (i, &k) in kernel.iter().enumerate() {
                let sy = y as isize + i as isize - radius;
                acc += k * tmp.get_clamped(x as isize, sy);
            }
            out.set(x, y, acc);
        }
    }
    Ok(out)
}

/// Blur an 8-bit image, returning real intensities.
pub fn gaussian_blur_u8(img: &GrayImage, sigma: f64) -> Result<FloatImage> {
    gaussian_blur(&img.to_float(), sigma)
}

/// 3x3 Sobel gradients (1-2-1 smoothing, -1-0-1 difference); borders use
/// replicated edges. Requires at least a 3x3 image.
pub fn gradients(img: &FloatImage) -> Result<(FloatImage, FloatImage)> {
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        return Err(Error::InvalidParam(format!(
            "gradients need >= 3x3 image, got {w}x{h}"
        )));
    }
    let mut gx = FloatImage::zeros(w, h);
    let mut gy = FloatImage::zeros(w, h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let p = |dx: isize, dy: isize| img.get_clamped(x + dx, y + dy);
            let dx = (p(1, -1) - p(-1, -1)) + 2.0 * (p(1, 0) - p(-1, 0)) + (p(1, 1) - p(-1, 1));
            let dy = (p(-1, 1) - p(-1, -1)) + 2.0 * (p(0, 1) - p(0, -1)) + (p(1, 1) - p(1, -1));
            gx.set(x as usize, y as usize, dx);
            gy.set(x as usize, y as usize, dy);
        }
    }
    Ok((gx, gy))
}
