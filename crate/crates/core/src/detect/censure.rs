//! CenSurE-style center-surround detector: bi-level Difference-of-Boxes
//! filters at 7 scales evaluated through a single integral image, with
//! scale-space non-max suppression and a Harris-ratio edge test.

use super::{in_mask, sort_keypoints, Keypoint};
use crate::imgcore::{integral, FloatImage, GrayImage, IntegralImage};
use crate::synth::RegionMask;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct CensureConfig {
    /// Number of filter scales n = 1..n_scales.
    pub n_scales: usize,
    /// Threshold on the absolute mean-difference response (8-bit units).
    pub response_threshold: f64,
    /// Reject when trace^2 / det of the response structure tensor exceeds
    /// this (edge suppression).
    pub line_threshold: f64,
}

impl Default for CensureConfig {
    fn default() -> Self {
        Self {
            n_scales: 7,
            response_threshold: 6.0,
            line_threshold: 10.0,
        }
    }
}

/// Inner box half-width for scale n (side 2n+1).
#[inline]
fn inner_half(n: usize) -> usize {
    n
}

/// Outer box half-width for scale n (side 4n+1).
#[inline]
fn outer_half(n: usize) -> usize {
    2 * n
}

/// Mean(inner) - mean(surround ring); zero on constant images.
pub(crate) fn dob_response(ii: &IntegralImage, x: usize, y: usize, n: usize) -> f64 {
    let ih = inner_half(n);
    let oh = outer_half(n);
    let inner = ii.box_sum(x - ih, y - ih, x + ih + 1, y + ih + 1) as f64;
    let outer = ii.box_sum(x - oh, y - oh, x + oh + 1, y + oh + 1) as f64;
    let inner_area = ((2 * n + 1) * (2 * n + 1)) as f64;
    let outer_area = ((4 * n + 1) * (4 * n + 1)) as f64;
    let ring = outer - inner;
    let ring_area = outer_area - inner_area;
    inner / inner_area - ring / ring_area
}

/// Detect scale-space extrema of the DoB filter bank. Keypoint size is the
/// outer box side (4n+1) of the winning scale; no orientation.
pub fn detect_censure(
    img: &GrayImage,
    cfg: &CensureConfig,
    mask: Option<&RegionMask>,
) -> Result<Vec<Keypoint>> {
    let (w, h) = (img.width(), img.height());
    if cfg.n_scales < 3 {
        return Err(Error::InvalidParam("censure needs at least 3 scales".into()));
    }
    let max_margin = outer_half(cfg.n_scales);
    if w <= 2 * max_margin + 1 || h <= 2 * max_margin + 1 {
        return Err(Error::InvalidParam(format!(
            "image {w}x{h} smaller than the largest censure filter ({} px)",
            4 * cfg.n_scales + 1
        )));
    }
    let ii = integral(img);

    // Response stack, one plane per scale; borders where the outer box
    // does not fit stay 0.
    let mut planes: Vec<FloatImage> = Vec::with_capacity(cfg.n_scales);
    for n in 1..=cfg.n_scales {
        let m = outer_half(n);
        let mut plane = FloatImage::zeros(w, h);
        for y in m..h - m {
            for x in m..w - m {
                plane.set(x, y, dob_response(&ii, x, y, n));
            }
        }
        planes.push(plane);
    }

    let mut kps = Vec::new();
    // Interior scales only: a 3x3x3 neighborhood must exist.
    for s in 1..cfg.n_scales - 1 {
        let n = s + 1;
        let m = outer_half(n + 1); // margin where all three scales are valid
        for y in m..h - m {
            for x in m..w - m {
                let r = planes[s].get(x, y);
                let mag = r.abs();
                if mag <= cfg.response_threshold {
                    continue;
                }
                if !is_scale_space_max(&planes, s, x, y, mag) {
                    continue;
                }
                if !in_mask(mask, x as f64, y as f64) {
                    continue;
                }
                if edge_ratio(&planes[s], x, y, n) > cfg.line_threshold {
                    continue;
                }
                kps.push(Keypoint {
                    x: x as f64,
                    y: y as f64,
                    size: (4 * n + 1) as f64,
                    angle: None,
                    response: mag,
                    octave: n as u32,
                });
            }
        }
    }
    sort_keypoints(&mut kps);
    Ok(kps)
}

/// Strict |response| maximum over the 3x3x3 neighborhood, scan-order
/// tie-break within the own plane.
fn is_scale_space_max(planes: &[FloatImage], s: usize, x: usize, y: usize, mag: f64) -> bool {
    for (ds, plane) in planes[s - 1..=s + 1].iter().enumerate() {
        for dy in -1..=1isize {
            for dx in -1..=1isize {
                if ds == 1 && dx == 0 && dy == 0 {
                    continue;
                }
                let v = plane
                    .get_clamped(x as isize + dx, y as isize + dy)
                    .abs();
                if v > mag {
                    return false;
                }
                if v == mag && (ds < 1 || (ds == 1 && (dy < 0 || (dy == 0 && dx < 0)))) {
                    return false;
                }
            }
        }
    }
    true
}

/// Harris ratio trace^2/det of the structure tensor of the response plane
/// over a window scaled with the filter (half-width 2n). Large values mean
/// an elongated, edge-like response.
fn edge_ratio(plane: &FloatImage, x: usize, y: usize, n: usize) -> f64 {
    let r = 2 * n as isize;
    let (mut xx, mut xy, mut yy) = (0.0, 0.0, 0.0);
    for dy in -r..=r {
        for dx in -r..=r {
            let px = x as isize + dx;
            let py = y as isize + dy;
            let gx = plane.get_clamped(px + 1, py) - plane.get_clamped(px - 1, py);
            let gy = plane.get_clamped(px, py + 1) - plane.get_clamped(px, py - 1);
            xx += gx * gx;
            xy += gx * gy;
            yy += gy * gy;
        }
    }
    let det = xx * yy - xy * xy;
    let tr = xx + yy;
    if det <= 0.0 {
        f64::INFINITY
    } else {
        tr * tr / det
    }
}
