//! Bicubic (Catmull-Rom) rotation about the image center.

use super::{quantize_u8, FloatImage, GrayImage};

/// Rotation matrix for degrees, convention: p' = R p with
/// R = [[cos, -sin], [sin, cos]] acting on raster (x, y).
#[inline]
pub(crate) fn rot_matrix(angle_deg: f64) -> [f64; 4] {
    let rad = angle_deg.to_radians();
    let (s, c) = rad.sin_cos();
    [c, -s, s, c]
}

/// Catmull-Rom cubic kernel (a = -0.5).
#[inline]
fn cubic_weight(t: f64) -> f64 {
    const A: f64 = -0.5;
    let t = t.abs();
    if t < 1.0 {
        (A + 2.0) * t * t * t - (A + 3.0) * t * t + 1.0
    } else if t < 2.0 {
        A * t * t * t - 5.0 * A * t * t + 8.0 * A * t - 4.0 * A
    } else {
        0.0
    }
}

/// Bicubic sample at real coordinates; the 4x4 support clamps to edges.
/// Returns `None` when (x, y) itself lies outside the image.
pub(crate) fn sample_bicubic(img: &FloatImage, x: f64, y: f64) -> Option<f64> {
    let (w, h) = (img.width() as f64, img.height() as f64);
    // Tolerate rounding at the exact bounds (e.g. sin/cos of right angles).
    const EPS: f64 = 1e-9;
    if x < -EPS || y < -EPS || x > w - 1.0 + EPS || y > h - 1.0 + EPS {
        return None;
    }
    let x = x.clamp(0.0, w - 1.0);
    let y = y.clamp(0.0, h - 1.0);
    let x0 = x.floor();
    let y0 = y.floor();
    let fx = x - x0;
    let fy = y - y0;
    let mut acc = 0.0;
    for j in -1..=2isize {
        let wy = cubic_weight(fy - j as f64);
        if wy == 0.0 {
            continue;
        }
        for i in -1..=2isize {
            let wx = cubic_weight(fx - i as f64);
            if wx == 0.0 {
                continue;
            }
            acc += wx * wy * img.get_clamped(x0 as isize + i, y0 as isize + j);
        }
    }
    Some(acc)
}

/// Rotate by `angle_deg` about the image center ((w-1)/2, (h-1)/2) using
/// bicubic interpolation. Output pixels whose inverse-mapped source location
/// falls outside the source image are 0; everything else is clamped to
/// [0, 255] and rounded.
///
/// The inverse map is src = R(angle) (dst - c) + c, so for a square image
/// `warp_rotate(img, 90)` equals transpose-then-vertical-flip exactly.
pub fn warp_rotate(img: &GrayImage, angle_deg: f64) -> GrayImage {
    let (w, h) = (img.width(), img.height());
    let (cx, cy) = img.center();
    let [m00, m01, m10, m11] = rot_matrix(angle_deg);
    let src = img.to_float();
    let mut out = FloatImage::zeros(w, h);
    for y in 0..h {
        let dy = y as f64 - cy;
        for x in 0..w {
            let dx = x as f64 - cx;
            let sx = m00 * dx + m01 * dy + cx;
            let sy = m10 * dx + m11 * dy + cy;
            let v = sample_bicubic(&src, sx, sy).unwrap_or(0.0);
            out.set(x, y, v);
        }
    }
    GrayImage::new(w, h, out.values().iter().map(|&v| quantize_u8(v)).collect())
        .expect("same dims as input")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_image(w: usize, h: usize, seed: u64) -> GrayImage {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        GrayImage::new(w, h, (0..w * h).map(|_| rng.gen()).collect()).unwrap()
    }

    #[test]
    fn zero_angle_is_identity() {
        let img = random_image(23, 17, 1);
        assert_eq!(warp_rotate(&img, 0.0), img);
    }

    #[test]
    fn ninety_degrees_is_transpose_then_vflip() {
        let n = 32;
        let img = random_image(n, n, 2);
        let rotated = warp_rotate(&img, 90.0);
        for y in 0..n {
            for x in 0..n {
                // out(x, y) = in(n-1-y, x)
                assert_eq!(rotated.get(x, y), img.get(n - 1 - y, x), "({x},{y})");
            }
        }
    }

    #[test]
    fn one_eighty_twice_restores_interior() {
        let n = 40;
        let img = random_image(n, n, 3);
        let back = warp_rotate(&warp_rotate(&img, 180.0), 180.0);
        for y in 4..n - 4 {
            for x in 4..n - 4 {
                assert_eq!(back.get(x, y), img.get(x, y), "({x},{y})");
            }
        }
    }

    #[test]
    fn four_quarter_turns_restore_square_interior() {
        let n = 24;
        let img = random_image(n, n, 4);
        let mut cur = img.clone();
        for _ in 0..4 {
            cur = warp_rotate(&cur, 90.0);
        }
        assert_eq!(cur, img);
    }

    #[test]
    fn corners_are_zeroed_at_45_degrees() {
        let img = GrayImage::filled(64, 64, 200);
        let rotated = warp_rotate(&img, 45.0);
        assert_eq!(rotated.get(0, 0), 0);
        assert_eq!(rotated.get(63, 0), 0);
        assert_eq!(rotated.get(0, 63), 0);
        assert_eq!(rotated.get(63, 63), 0);
        assert_eq!(rotated.get(32, 32), 200);
    }
}
