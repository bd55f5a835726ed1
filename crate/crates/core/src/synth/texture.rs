//! Procedural ground-texture stand-ins so the evaluation suite runs
//! without an external image database.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::imgcore::{FloatImage, GrayImage};
use crate::{Error, Result};

/// Available fixture texture families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextureKind {
    /// Scattered hard-edged discs of varying radius and intensity.
    Blobs,
    /// Multi-octave value noise (power at several spatial frequencies).
    FractalNoise,
    /// Per-pixel uniform noise lightly mixed with a coarse layer.
    Speckle,
}

impl TextureKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "blobs" => Ok(TextureKind::Blobs),
            "fractal-noise" => Ok(TextureKind::FractalNoise),
            "speckle" => Ok(TextureKind::Speckle),
            other => Err(Error::Config(format!("unknown texture kind '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TextureKind::Blobs => "blobs",
            TextureKind::FractalNoise => "fractal-noise",
            TextureKind::Speckle => "speckle",
        }
    }

    pub const ALL: [TextureKind; 3] = [
        TextureKind::Blobs,
        TextureKind::FractalNoise,
        TextureKind::Speckle,
    ];
}

/// Deterministic texture generation; output spans the 8-bit range
/// (min <= 10, max >= 245).
pub fn generate_texture(kind: TextureKind, width: usize, height: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ (kind as u64) << 32);
    let field = match kind {
        TextureKind::Blobs => blobs(width, height, &mut rng),
        TextureKind::FractalNoise => fractal_noise(width, height, &mut rng),
        TextureKind::Speckle => speckle(width, height, &mut rng),
    };
    stretch_to_gray(&field)
}

fn blobs(width: usize, height: usize, rng: &mut ChaCha12Rng) -> FloatImage {
    let mut img = FloatImage::zeros(width, height);
    // Mid-gray base with faint per-pixel texture so flat areas still carry
    // gradient signal for descriptors.
    for y in 0..height {
        for x in 0..width {
            img.set(x, y, 128.0 + rng.gen_range(-6.0..6.0));
        }
    }
    let n = (width * height / 700).max(24);
    for _ in 0..n {
        let cx = rng.gen_range(0.0..width as f64);
        let cy = rng.gen_range(0.0..height as f64);
        let r = rng.gen_range(3.0..22.0);
        let v = rng.gen_range(0.0..255.0);
        let (x0, x1) = clamp_span(cx - r, cx + r, width);
        let (y0, y1) = clamp_span(cy - r, cy + r, height);
        for y in y0..y1 {
            for x in x0..x1 {
                let dx = x as f64 - cx;
                let dy = y as f64 - cy;
                if dx * dx + dy * dy <= r * r {
                    img.set(x, y, v + rng.gen_range(-4.0..4.0));
                }
            }
        }
    }
    img
}

fn clamp_span(lo: f64, hi: f64, max: usize) -> (usize, usize) {
    let lo = lo.floor().max(0.0) as usize;
    let hi = (hi.ceil() as usize + 1).min(max);
    (lo, hi)
}

fn fractal_noise(width: usize, height: usize, rng: &mut ChaCha12Rng) -> FloatImage {
    let mut img = FloatImage::zeros(width, height);
    let mut amplitude = 1.0;
    let mut cell = 64.0f64;
    while cell >= 2.0 {
        let gw = (width as f64 / cell).ceil() as usize + 2;
        let gh = (height as f64 / cell).ceil() as usize + 2;
        let lattice: Vec<f64> = (0..gw * gh).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for y in 0..height {
            let fy = y as f64 / cell;
            let gy = fy.floor() as usize;
            let ty = smoothstep(fy - gy as f64);
            for x in 0..width {
                let fx = x as f64 / cell;
                let gx = fx.floor() as usize;
                let tx = smoothstep(fx - gx as f64);
                let v00 = lattice[gy * gw + gx];
                let v10 = lattice[gy * gw + gx + 1];
                let v01 = lattice[(gy + 1) * gw + gx];
                let v11 = lattice[(gy + 1) * gw + gx + 1];
                let top = v00 + (v10 - v00) * tx;
                let bot = v01 + (v11 - v01) * tx;
                let v = top + (bot - top) * ty;
                img.set(x, y, img.get(x, y) + amplitude * v);
            }
        }
        amplitude *= 0.55;
        cell /= 2.0;
    }
    img
}

#[inline]
fn smoothstep(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

fn speckle(width: usize, height: usize, rng: &mut ChaCha12Rng) -> FloatImage {
    // Coarse layer keeps some low-frequency content; the dominant term is
    // per-pixel uniform noise.
    let coarse = fractal_noise(width, height, rng);
    let mut img = FloatImage::zeros(width, height);
    for y in 0..height {
        for x in 0..width {
            img.set(x, y, rng.gen_range(0.0..255.0) + 40.0 * coarse.get(x, y));
        }
    }
    img
}

/// Linear stretch to the full 8-bit range.
fn stretch_to_gray(img: &FloatImage) -> GrayImage {
    let min = img.values().iter().cloned().fold(f64::INFINITY, f64::min);
    let max = img.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = (max - min).max(1e-12);
    let mut out = FloatImage::zeros(img.width(), img.height());
    for y in 0..img.height() {
        for x in 0..img.width() {
            out.set(x, y, (img.get(x, y) - min) / span * 255.0);
        }
    }
    out.to_gray()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textures_are_seed_deterministic() {
        for kind in TextureKind::ALL {
            let a = generate_texture(kind, 96, 64, 11);
            let b = generate_texture(kind, 96, 64, 11);
            let c = generate_texture(kind, 96, 64, 12);
            assert_eq!(a, b, "{kind:?}");
            assert_ne!(a, c, "{kind:?}");
        }
    }

    #[test]
    fn textures_use_full_dynamic_range() {
        for kind in TextureKind::ALL {
            let img = generate_texture(kind, 128, 128, 3);
            let min = *img.pixels().iter().min().unwrap();
            let max = *img.pixels().iter().max().unwrap();
            assert!(min <= 10, "{kind:?} min {min}");
            assert!(max >= 245, "{kind:?} max {max}");
        }
    }

    #[test]
    fn blobs_texture_feeds_harris_at_least_100_keypoints() {
        let img = generate_texture(TextureKind::Blobs, 512, 512, 1);
        let det = crate::detect::Detector::by_name("harris").unwrap();
        let kps = det.detect(&img, None).unwrap();
        assert!(kps.len() >= 100, "{}", kps.len());
    }

    #[test]
    fn speckle_histogram_spans_many_levels() {
        let img = generate_texture(TextureKind::Speckle, 256, 256, 5);
        let mut seen = [false; 256];
        for &v in img.pixels() {
            seen[v as usize] = true;
        }
        let distinct = seen.iter().filter(|&&s| s).count();
        assert!(distinct >= 200, "{distinct} levels");
    }
}
