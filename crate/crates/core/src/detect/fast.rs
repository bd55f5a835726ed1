//! FAST segment-test corner detection on the 16-pixel Bresenham circle of
//! radius 3, with compass-pixel early rejection and 3x3 non-max
//! suppression on the arc response.

use super::{in_mask, sort_keypoints, Keypoint};
use crate::imgcore::GrayImage;
use crate::synth::RegionMask;
use crate::{Error, Result};

/// Circle offsets in clockwise order starting at 12 o'clock.
pub(crate) const CIRCLE: [(i32, i32); 16] = [
    (0, -3),
    (1, -3),
    (2, -2),
    (3, -1),
    (3, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 3),
    (-1, 3),
    (-2, 2),
    (-3, 1),
    (-3, 0),
    (-3, -1),
    (-2, -2),
    (-1, -3),
];

#[derive(Debug, Clone)]
pub struct FastConfig {
    /// Intensity threshold t.
    pub threshold: u8,
    /// Required contiguous arc length (default 9).
    pub arc: usize,
}

impl Default for FastConfig {
    fn default() -> Self {
        // Calibrated on the procedural fixture textures: >= 1000 raw corners
        // on fractal-noise at 512x512.
        Self {
            threshold: 8,
            arc: 9,
        }
    }
}

/// Arc response at a pixel, or None when it is not a corner: the maximum
/// over qualifying contiguous runs of sum(|difference| - t).
pub(crate) fn segment_response(img: &GrayImage, x: usize, y: usize, cfg: &FastConfig) -> Option<f64> {
    let p = img.get(x, y) as i32;
    let t = cfg.threshold as i32;
    let mut brighter = [false; 16];
    let mut darker = [false; 16];
    let mut diff = [0i32; 16];
    for (i, &(dx, dy)) in CIRCLE.iter().enumerate() {
        let v = img.get((x as i32 + dx) as usize, (y as i32 + dy) as usize) as i32;
        diff[i] = v - p;
        brighter[i] = v > p + t;
        darker[i] = v < p - t;
    }
    let best_b = best_run(&brighter, &diff, t, cfg.arc);
    let best_d = best_run(&darker, &diff, t, cfg.arc);
    match (best_b, best_d) {
        (None, None) => None,
        (a, b) => Some(a.unwrap_or(0.0).max(b.unwrap_or(0.0))),
    }
}

/// Scan maximal circular runs of `flags`; for each run of length >= arc,
/// sum |diff| - t over it and keep the best.
fn best_run(flags: &[bool; 16], diff: &[i32; 16], t: i32, arc: usize) -> Option<f64> {
    if flags.iter().all(|&f| f) {
        let sum: i32 = diff.iter().map(|&d| d.abs() - t).sum();
        return Some(sum as f64);
    }
    let mut best: Option<i32> = None;
    for start in 0..16 {
        // A maximal run begins where the previous circle pixel fails.
        if !flags[start] || flags[(start + 15) % 16] {
            continue;
        }
        let mut len = 0;
        let mut sum = 0;
        while len < 16 && flags[(start + len) % 16] {
            sum += diff[(start + len) % 16].abs() - t;
            len += 1;
        }
        if len >= arc && best.map_or(true, |b| sum > b) {
            best = Some(sum);
        }
    }
    best.map(|b| b as f64)
}

/// Detect FAST corners. Keypoints get size 7 and no orientation.
pub fn detect_fast(
    img: &GrayImage,
    cfg: &FastConfig,
    mask: Option<&RegionMask>,
) -> Result<Vec<Keypoint>> {
    let (w, h) = (img.width(), img.height());
    if w < 7 || h < 7 {
        return Err(Error::InvalidParam(format!(
            "FAST needs >= 7x7 image, got {w}x{h}"
        )));
    }
    if cfg.arc < 9 || cfg.arc > 16 {
        return Err(Error::InvalidParam(format!("FAST arc {} out of [9, 16]", cfg.arc)));
    }
    let t = cfg.threshold as i32;
    let mut resp = vec![f64::NEG_INFINITY; w * h];
    for y in 3..h - 3 {
        for x in 3..w - 3 {
            let p = img.get(x, y) as i32;
            // Early rejection on the 4 compass pixels: any 9-long arc
            // covers at least 2 of them.
            let mut nb = 0;
            let mut nd = 0;
            for &(dx, dy) in &[CIRCLE[0], CIRCLE[4], CIRCLE[8], CIRCLE[12]] {
                let v = img.get((x as i32 + dx) as usize, (y as i32 + dy) as usize) as i32;
                if v > p + t {
                    nb += 1;
                }
                if v < p - t {
                    nd += 1;
                }
            }
            if nb < 2 && nd < 2 {
                continue;
            }
            if let Some(r) = segment_response(img, x, y, cfg) {
                resp[y * w + x] = r;
            }
        }
    }
    let mut kps = Vec::new();
    for y in 3..h - 3 {
        for x in 3..w - 3 {
            let r = resp[y * w + x];
            if r == f64::NEG_INFINITY {
                continue;
            }
            let mut is_max = true;
            'nb: for dy in -1..=1i32 {
                for dx in -1..=1i32 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let n = resp[(y as i32 + dy) as usize * w + (x as i32 + dx) as usize];
                    if n > r || (n == r && (dy < 0 || (dy == 0 && dx < 0))) {
                        is_max = false;
                        break 'nb;
                    }
                }
            }
            if !is_max || !in_mask(mask, x as f64, y as f64) {
                continue;
            }
            kps.push(Keypoint {
                x: x as f64,
                y: y as f64,
                size: 7.0,
                angle: None,
                response: r,
                octave: 0,
            });
        }
    }
    sort_keypoints(&mut kps);
    Ok(kps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Reference implementation: test every one of the 16 circular windows
    /// of length `arc` directly.
    fn naive_response(img: &GrayImage, x: usize, y: usize, cfg: &FastConfig) -> Option<f64> {
        let p = img.get(x, y) as i32;
        let t = cfg.threshold as i32;
        let vals: Vec<i32> = CIRCLE
            .iter()
            .map(|&(dx, dy)| img.get((x as i32 + dx) as usize, (y as i32 + dy) as usize) as i32)
            .collect();
        let mut best: Option<i32> = None;
        // Every run length from arc to 16, every start.
        for start in 0..16 {
            for len in cfg.arc..=16 {
                let win: Vec<i32> = (0..len).map(|i| vals[(start + i) % 16]).collect();
                let all_b = win.iter().all(|&v| v > p + t);
                let all_d = win.iter().all(|&v| v < p - t);
                if all_b || all_d {
                    let sum: i32 = win.iter().map(|&v| (v - p).abs() - t).sum();
                    if best.map_or(true, |b| sum > b) {
                        best = Some(sum);
                    }
                }
            }
        }
        best.map(|b| b as f64)
    }

    #[test]
    fn single_bright_pixel_is_a_corner() {
        let mut img = GrayImage::filled(15, 15, 0);
        img.set(7, 7, 255);
        let cfg = FastConfig {
            threshold: 20,
            arc: 9,
        };
        let kps = detect_fast(&img, &cfg, None).unwrap();
        assert_eq!(kps.len(), 1, "{kps:?}");
        assert_eq!((kps[0].x, kps[0].y), (7.0, 7.0));
        // All 16 circle pixels are darker: response = 16 * (255 - 20).
        assert_eq!(kps[0].response, 16.0 * 235.0);
    }

    #[test]
    fn constant_image_is_empty() {
        let img = GrayImage::filled(32, 32, 90);
        assert!(detect_fast(&img, &FastConfig::default(), None)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn optimized_path_equals_naive_oracle() {
        let cfg = FastConfig::default();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        for trial in 0..50 {
            let data: Vec<u8> = (0..64 * 64).map(|_| rng.gen()).collect();
            let img = GrayImage::new(64, 64, data).unwrap();
            for y in 3..61 {
                for x in 3..61 {
                    assert_eq!(
                        segment_response(&img, x, y, &cfg),
                        naive_response(&img, x, y, &cfg),
                        "trial {trial} at ({x},{y})"
                    );
                }
            }
        }
    }
}
