//! Gradient-orientation assignment: 36-bin weighted histogram over a
//! Gaussian window, one output keypoint per peak >= 80% of the maximum.

use super::Keypoint;
use crate::imgcore::FloatImage;

const BINS: usize = 36;
const BIN_WIDTH: f64 = 360.0 / BINS as f64;

/// Assign one or more orientations to a keypoint whose coordinates and size
/// (diameter = 3 sigma) live in `img_level`'s frame. Returns an empty vec
/// when the sampling window leaves the image.
pub fn assign_orientation(img_level: &FloatImage, kp: &Keypoint) -> Vec<Keypoint> {
    let sigma = 1.5 * (kp.size / 3.0);
    let radius = (3.0 * sigma).ceil().max(2.0) as isize;
    let (w, h) = (img_level.width() as isize, img_level.height() as isize);
    let xi = kp.x.round() as isize;
    let yi = kp.y.round() as isize;
    // Gradients need one extra pixel around the window.
    if xi - radius < 1 || yi - radius < 1 || xi + radius > w - 2 || yi + radius > h - 2 {
        return Vec::new();
    }

    let mut hist = [0.0f64; BINS];
    let denom = 2.0 * sigma * sigma;
    for dy in -radius..=radius {
        for dx in -radius..=radius {
            let x = xi + dx;
            let y = yi + dy;
            let gx = img_level.get((x + 1) as usize, y as usize)
                - img_level.get((x - 1) as usize, y as usize);
            let gy = img_level.get(x as usize, (y + 1) as usize)
                - img_level.get(x as usize, (y - 1) as usize);
            let mag = (gx * gx + gy * gy).sqrt();
            if mag == 0.0 {
                continue;
            }
            let weight = (-((dx * dx + dy * dy) as f64) / denom).exp();
            let angle = gy.atan2(gx).to_degrees().rem_euclid(360.0);
            let bin = ((angle / BIN_WIDTH) as usize).min(BINS - 1);
            hist[bin] += mag * weight;
        }
    }

    // Two passes of circular [1 1 1]/3 smoothing.
    for _ in 0..2 {
        let prev = hist;
        for i in 0..BINS {
            hist[i] =
                (prev[(i + BINS - 1) % BINS] + prev[i] + prev[(i + 1) % BINS]) / 3.0;
        }
    }

    let peak = hist.iter().cloned().fold(0.0f64, f64::max);
    if peak <= 0.0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for i in 0..BINS {
        let c = hist[i];
        let l = hist[(i + BINS - 1) % BINS];
        let r = hist[(i + 1) % BINS];
        if c < 0.8 * peak || c <= l || c < r {
            continue;
        }
        // Parabolic refinement of the peak bin.
        let denom = l - 2.0 * c + r;
        let offset = if denom.abs() < 1e-12 {
            0.0
        } else {
            0.5 * (l - r) / denom
        };
        let angle = ((i as f64 + 0.5 + offset) * BIN_WIDTH).rem_euclid(360.0);
        let mut kp_out = *kp;
        kp_out.angle = Some(angle);
        out.push(kp_out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imgcore::warp_rotate;
    use crate::imgcore::GrayImage;

    fn kp_at(x: f64, y: f64, size: f64) -> Keypoint {
        Keypoint {
            x,
            y,
            size,
            angle: None,
            response: 1.0,
            octave: 0,
        }
    }

    #[test]
    fn ramp_gives_single_zero_orientation() {
        let n = 48;
        let mut img = FloatImage::zeros(n, n);
        for y in 0..n {
            for x in 0..n {
                img.set(x, y, x as f64 * 3.0);
            }
        }
        let kps = assign_orientation(&img, &kp_at(24.0, 24.0, 9.0));
        assert_eq!(kps.len(), 1, "{kps:?}");
        let a = kps[0].angle.unwrap();
        let wrapped = if a > 180.0 { a - 360.0 } else { a };
        assert!(wrapped.abs() < 6.0, "angle {a}");
    }

    #[test]
    fn two_gradient_populations_give_two_orientations() {
        // Left half ramps along +x, right half ramps along +y: two equal
        // orthogonal gradient populations.
        let n = 60;
        let mut img = FloatImage::zeros(n, n);
        for y in 0..n {
            for x in 0..n {
                let v = if x < n / 2 {
                    x as f64 * 4.0
                } else {
                    y as f64 * 4.0
                };
                img.set(x, y, v);
            }
        }
        let kps = assign_orientation(&img, &kp_at(30.0, 30.0, 12.0));
        assert_eq!(kps.len(), 2, "{kps:?}");
        let mut angles: Vec<f64> = kps.iter().map(|k| k.angle.unwrap()).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(angles[0] < 20.0, "{angles:?}");
        assert!((angles[1] - 90.0).abs() < 20.0, "{angles:?}");
    }

    #[test]
    fn window_leaving_image_yields_empty() {
        let img = FloatImage::zeros(30, 30);
        assert!(assign_orientation(&img, &kp_at(2.0, 15.0, 12.0)).is_empty());
    }

    #[test]
    fn orientation_is_rotation_equivariant() {
        // A diagonal-gradient texture rotated by 30 degrees must shift the
        // detected orientation by 30 degrees (up to binning error).
        let n = 96;
        let mut img = GrayImage::filled(n, n, 0);
        for y in 0..n {
            for x in 0..n {
                let v = (x as f64 * 1.4 + y as f64 * 0.6).min(255.0);
                img.set(x, y, v as u8);
            }
        }
        // Smooth first, as the pyramid levels the production caller passes
        // in are; raw u8 quantization staircases would dominate otherwise.
        let smooth = |g: &GrayImage| crate::imgcore::gaussian_blur_u8(g, 2.0).unwrap();
        let base = assign_orientation(&smooth(&img), &kp_at(48.0, 48.0, 10.0));
        assert_eq!(base.len(), 1);
        let a0 = base[0].angle.unwrap();

        let theta = 30.0;
        let rotated = warp_rotate(&img, theta);
        let turned = assign_orientation(&smooth(&rotated), &kp_at(48.0, 48.0, 10.0));
        assert_eq!(turned.len(), 1);
        let a1 = turned[0].angle.unwrap();
        // Content moves with R(-theta), so gradients (and the detected
        // orientation) shift by -theta.
        let diff = (a1 - (a0 - theta)).rem_euclid(360.0);
        let diff = diff.min(360.0 - diff);
        assert!(diff <= 5.0, "a0 {a0}, a1 {a1}");
    }
}
