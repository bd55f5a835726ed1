//! Structure-tensor corner detection: Harris response and the Shi-Tomasi
//! minimum-eigenvalue variant (GFTT).

use super::{in_mask, sort_keypoints, Keypoint};
use crate::imgcore::{gaussian_blur, gradients, FloatImage, GrayImage};
use crate::synth::RegionMask;
use crate::{Error, Result};

/// Which scalar is taken from the structure tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CornerResponse {
    /// det(M) - k trace(M)^2
    Harris,
    /// Smaller eigenvalue of M (Shi-Tomasi / GFTT).
    MinEigenvalue,
}

#[derive(Debug, Clone)]
pub struct CornerConfig {
    /// Gaussian window sigma for accumulating the structure tensor.
    pub sigma_window: f64,
    /// Harris k.
    pub k: f64,
    /// Response threshold on intensities normalized to [0, 1].
    pub harris_threshold: f64,
    /// Threshold for the min-eigenvalue response.
    pub min_eig_threshold: f64,
}

impl Default for CornerConfig {
    fn default() -> Self {
        Self {
            sigma_window: 2.0,
            k: 0.04,
            harris_threshold: 1e-7,
            min_eig_threshold: 1e-3,
        }
    }
}

/// Detect corners: Sobel gradients, Gaussian-windowed structure tensor,
/// 3x3 local maxima above threshold. Keypoints get size 6 * sigma_window
/// and no orientation.
pub fn detect_corners(
    img: &GrayImage,
    cfg: &CornerConfig,
    response: CornerResponse,
    mask: Option<&RegionMask>,
) -> Result<Vec<Keypoint>> {
    let (w, h) = (img.width(), img.height());
    if w < 7 || h < 7 {
        return Err(Error::InvalidParam(format!(
            "corner detection needs >= 7x7 image, got {w}x{h}"
        )));
    }
    // Normalize to [0, 1] so thresholds are intensity-scale free.
    let mut f = img.to_float();
    for y in 0..h {
        for x in 0..w {
            f.set(x, y, f.get(x, y) / 255.0);
        }
    }
    let (gx, gy) = gradients(&f)?;
    let mut ixx = FloatImage::zeros(w, h);
    let mut ixy = FloatImage::zeros(w, h);
    let mut iyy = FloatImage::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            let dx = gx.get(x, y);
            let dy = gy.get(x, y);
            ixx.set(x, y, dx * dx);
            ixy.set(x, y, dx * dy);
            iyy.set(x, y, dy * dy);
        }
    }
    let ixx = gaussian_blur(&ixx, cfg.sigma_window)?;
    let ixy = gaussian_blur(&ixy, cfg.sigma_window)?;
    let iyy = gaussian_blur(&iyy, cfg.sigma_window)?;

    let threshold = match response {
        CornerResponse::Harris => cfg.harris_threshold,
        CornerResponse::MinEigenvalue => cfg.min_eig_threshold,
    };
    let mut resp = FloatImage::zeros(w, h);
    for y in 0..h {
        for x in 0..w {
            let a = ixx.get(x, y);
            let b = ixy.get(x, y);
            let c = iyy.get(x, y);
            let r = match response {
                CornerResponse::Harris => {
                    let det = a * c - b * b;
                    let tr = a + c;
                    det - cfg.k * tr * tr
                }
                CornerResponse::MinEigenvalue => {
                    let half_tr = 0.5 * (a + c);
                    let d = (0.25 * (a - c) * (a - c) + b * b).sqrt();
                    half_tr - d
                }
            };
            resp.set(x, y, r);
        }
    }

    let size = 6.0 * cfg.sigma_window;
    let mut kps = Vec::new();
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let r = resp.get(x, y);
            if r <= threshold {
                continue;
            }
            if !is_local_max(&resp, x, y, r) {
                continue;
            }
            if !in_mask(mask, x as f64, y as f64) {
                continue;
            }
            kps.push(Keypoint {
                x: x as f64,
                y: y as f64,
                size,
                angle: None,
                response: r,
                octave: 0,
            });
        }
    }
    sort_keypoints(&mut kps);
    Ok(kps)
}

/// Strict 3x3 maximum, with scan-order tie-breaking so flat plateaus yield
/// exactly one keypoint.
#[inline]
pub(crate) fn is_local_max(resp: &FloatImage, x: usize, y: usize, r: f64) -> bool {
    for dy in -1..=1isize {
        for dx in -1..=1isize {
            if dx == 0 && dy == 0 {
                continue;
            }
            let n = resp.get_clamped(x as isize + dx, y as isize + dy);
            if n > r {
                return false;
            }
            // Equal neighbors: keep the first in scan order.
            if n == r && (dy < 0 || (dy == 0 && dx < 0)) {
                return false;
            }
        }
    }
    true
}
