//! Keypoint descriptors: BRIEF (optionally steered by keypoint orientation),
//! LATCH patch triplets, and a SIFT-style gradient histogram.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

use crate::detect::Keypoint;
use crate::imgcore::{gaussian_blur_u8, gradients, FloatImage, GrayImage};
use crate::{Error, Result};

/// Shared pattern seed so descriptors are comparable across runs and caches.
pub const DEFAULT_PATTERN_SEED: u64 = 0x6272_6965_6631u64;

/// Half-width of the 31x31 BRIEF sampling patch.
const BRIEF_HALF: i32 = 15;
/// Margin that keeps a BRIEF pattern inside the image for any rotation
/// (circumradius of the patch square, rounded up).
const BRIEF_MARGIN: f64 = 22.0;
/// LATCH mini-patches are 7x7 with centers inside a 48x48 window.
const LATCH_CENTER_HALF: i32 = 21;
const LATCH_PATCH_HALF: i32 = 3;
/// ceil(21 * sqrt(2)) + 3: rotated center reach plus mini-patch half-width.
const LATCH_MARGIN: f64 = 33.0;

/// Number of bits in the binary descriptors.
pub const BINARY_BITS: usize = 256;

/// A binary (256-bit, Hamming metric) or real-valued (Euclidean metric)
/// descriptor.
#[derive(Debug, Clone, PartialEq)]
pub enum Descriptor {
    Binary([u64; 4]),
    Real(Vec<f32>),
}

impl Descriptor {
    pub fn is_binary(&self) -> bool {
        matches!(self, Descriptor::Binary(_))
    }

    /// Index of the descriptor family for cache headers and kind checks.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Descriptor::Binary(_) => "binary",
            Descriptor::Real(_) => "real",
        }
    }
}

/// 256 comparison point pairs inside the 31x31 BRIEF patch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BriefPattern {
    pub pairs: Vec<((i32, i32), (i32, i32))>,
}

/// Draw 256 pairs i.i.d. from an isotropic Gaussian (sigma = patch width / 5)
/// clamped to the patch. Deterministic under the seed.
pub fn brief_pattern(seed: u64) -> BriefPattern {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let sigma = (2 * BRIEF_HALF + 1) as f64 / 5.0;
    let gauss = Normal::new(0.0, sigma).unwrap();
    let draw = |rng: &mut ChaCha12Rng| -> (i32, i32) {
        let x = gauss.sample(rng).round() as i32;
        let y = gauss.sample(rng).round() as i32;
        (
            x.clamp(-BRIEF_HALF, BRIEF_HALF),
            y.clamp(-BRIEF_HALF, BRIEF_HALF),
        )
    };
    let pairs = (0..BINARY_BITS)
        .map(|_| {
            let a = draw(&mut rng);
            let b = draw(&mut rng);
            (a, b)
        })
        .collect();
    BriefPattern { pairs }
}

/// LATCH triplet layout: mini-patch centers (anchor, companion 1,
/// companion 2), drawn uniformly so each 7x7 mini-patch stays inside the
/// 48x48 window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatchPattern {
    pub triplets: Vec<((i32, i32), (i32, i32), (i32, i32))>,
}

pub fn latch_pattern(seed: u64) -> LatchPattern {
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x4c41_5443_48);
    let draw = |rng: &mut ChaCha12Rng| -> (i32, i32) {
        (
            rng.gen_range(-LATCH_CENTER_HALF..=LATCH_CENTER_HALF),
            rng.gen_range(-LATCH_CENTER_HALF..=LATCH_CENTER_HALF),
        )
    };
    let triplets = (0..BINARY_BITS)
        .map(|_| {
            let a = draw(&mut rng);
            let p1 = draw(&mut rng);
            let p2 = draw(&mut rng);
            (a, p1, p2)
        })
        .collect();
    LatchPattern { triplets }
}

fn set_bit(words: &mut [u64; 4], i: usize) {
    words[i / 64] |= 1u64 << (i % 64);
}

/// Rotate an integer pattern offset by `angle_deg` about the origin.
fn steer(offset: (i32, i32), cos: f64, sin: f64) -> (f64, f64) {
    let (x, y) = (offset.0 as f64, offset.1 as f64);
    (cos * x - sin * y, sin * x + cos * y)
}

fn keypoint_rotation(kp: &Keypoint, steered: bool) -> (f64, f64) {
    match kp.angle {
        Some(a) if steered => {
            let r = a.to_radians();
            (r.cos(), r.sin())
        }
        _ => (1.0, 0.0),
    }
}

fn fits(kp: &Keypoint, margin: f64, width: usize, height: usize) -> bool {
    let (x, y) = (kp.x.round(), kp.y.round());
    x >= margin
        && y >= margin
        && x <= width as f64 - 1.0 - margin
        && y <= height as f64 - 1.0 - margin
}

fn sample_nearest(img: &FloatImage, x: f64, y: f64) -> f64 {
    img.get_clamped(x.round() as isize, y.round() as isize)
}

/// BRIEF on a pre-smoothed image: bit i = 1 iff I(p_i1) < I(p_i2). When
/// `steered`, pattern points are rotated by the keypoint angle first; an
/// absent angle means no rotation. Keypoints whose patch (at any rotation)
/// would exit the image are dropped, preserving input order otherwise.
pub fn describe_brief(
    img: &GrayImage,
    kps: &[Keypoint],
    pattern: &BriefPattern,
    steered: bool,
) -> Result<Vec<(Keypoint, Descriptor)>> {
    let smooth = gaussian_blur_u8(img, 2.0)?;
    let mut out = Vec::with_capacity(kps.len());
    for kp in kps {
        if !fits(kp, BRIEF_MARGIN, img.width(), img.height()) {
            continue;
        }
        let (cos, sin) = keypoint_rotation(kp, steered);
        let (cx, cy) = (kp.x.round(), kp.y.round());
        let mut words = [0u64; 4];
        for (i, &(a, b)) in pattern.pairs.iter().enumerate() {
            let (ax, ay) = steer(a, cos, sin);
            let (bx, by) = steer(b, cos, sin);
            let va = sample_nearest(&smooth, cx + ax, cy + ay);
            let vb = sample_nearest(&smooth, cx + bx, cy + by);
            if va < vb {
                set_bit(&mut words, i);
            }
        }
        out.push((*kp, Descriptor::Binary(words)));
    }
    Ok(out)
}

/// Sum of squared differences between two 7x7 mini-patches centered at the
/// (already steered) offsets `c1`, `c2` from the keypoint.
fn patch_ssd(
    img: &FloatImage,
    cx: f64,
    cy: f64,
    c1: (f64, f64),
    c2: (f64, f64),
) -> f64 {
    let mut ssd = 0.0;
    for dy in -LATCH_PATCH_HALF..=LATCH_PATCH_HALF {
        for dx in -LATCH_PATCH_HALF..=LATCH_PATCH_HALF {
            let a = sample_nearest(img, cx + c1.0 + dx as f64, cy + c1.1 + dy as f64);
            let b = sample_nearest(img, cx + c2.0 + dx as f64, cy + c2.1 + dy as f64);
            let d = a - b;
            ssd += d * d;
        }
    }
    ssd
}

/// LATCH: bit = 1 iff SSD(anchor, companion1) < SSD(anchor, companion2) on
/// the smoothed image. Steering follows describe_brief.
pub fn describe_latch(
    img: &GrayImage,
    kps: &[Keypoint],
    pattern: &LatchPattern,
    steered: bool,
) -> Result<Vec<(Keypoint, Descriptor)>> {
    let smooth = gaussian_blur_u8(img, 2.0)?;
    let mut out = Vec::with_capacity(kps.len());
    for kp in kps {
        if !fits(kp, LATCH_MARGIN, img.width(), img.height()) {
            continue;
        }
        let (cos, sin) = keypoint_rotation(kp, steered);
        let (cx, cy) = (kp.x.round(), kp.y.round());
        let mut words = [0u64; 4];
        for (i, &(a, p1, p2)) in pattern.triplets.iter().enumerate() {
            let a = steer(a, cos, sin);
            let p1 = steer(p1, cos, sin);
            let p2 = steer(p2, cos, sin);
            if patch_ssd(&smooth, cx, cy, a, p1) < patch_ssd(&smooth, cx, cy, a, p2) {
                set_bit(&mut words, i);
            }
        }
        out.push((*kp, Descriptor::Binary(words)));
    }
    Ok(out)
}

const GH_GRID: usize = 4;
const GH_ORI: usize = 8;
pub const GRAD_HIST_LEN: usize = GH_GRID * GH_GRID * GH_ORI;
const GH_CLAMP: f32 = 0.2;

/// SIFT-style descriptor: 4x4 spatial grid x 8 orientation bins over a
/// window of 1.5 x keypoint size, gradients rotated into the keypoint frame,
/// trilinear binning with Gaussian spatial weighting; L2-normalized, clamped
/// at 0.2, re-normalized. Zero-gradient windows yield the all-zero vector.
pub fn describe_grad_hist(
    img: &GrayImage,
    kps: &[Keypoint],
) -> Result<Vec<(Keypoint, Descriptor)>> {
    let float = img.to_float();
    let (gx, gy) = gradients(&float)?;
    let mut out = Vec::with_capacity(kps.len());
    for kp in kps {
        if kp.size <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "keypoint size must be > 0, got {}",
                kp.size
            )));
        }
        // Half-width of the sampling window in pixels.
        let radius = 1.5 * kp.size;
        if !fits(kp, radius * std::f64::consts::SQRT_2 + 1.0, img.width(), img.height()) {
            continue;
        }
        let angle = kp.angle.unwrap_or(0.0).to_radians();
        let (cos, sin) = (angle.cos(), angle.sin());
        let mut hist = [0.0f64; GRAD_HIST_LEN];
        let reach = (radius * std::f64::consts::SQRT_2).ceil() as isize;
        let (kx, ky) = (kp.x, kp.y);
        let sigma = radius; // Gaussian weight over the rotated window
        let mut total_mag = 0.0;
        for dy in -reach..=reach {
            for dx in -reach..=reach {
                let px = kx + dx as f64;
                let py = ky + dy as f64;
                // Rotate the offset into the keypoint frame.
                let u = cos * dx as f64 + sin * dy as f64;
                let v = -sin * dx as f64 + cos * dy as f64;
                // Continuous cell coordinates in [ -0.5, 3.5 ] for interior.
                let cbin = u / radius * (GH_GRID as f64 / 2.0) + GH_GRID as f64 / 2.0 - 0.5;
                let rbin = v / radius * (GH_GRID as f64 / 2.0) + GH_GRID as f64 / 2.0 - 0.5;
                if cbin <= -1.0
                    || cbin >= GH_GRID as f64
                    || rbin <= -1.0
                    || rbin >= GH_GRID as f64
                {
                    continue;
                }
                let gxv = gx.get_clamped(px.round() as isize, py.round() as isize);
                let gyv = gy.get_clamped(px.round() as isize, py.round() as isize);
                let mag = (gxv * gxv + gyv * gyv).sqrt();
                if mag == 0.0 {
                    continue;
                }
                total_mag += mag;
                let ori = gyv.atan2(gxv) - angle;
                let obin = (ori.rem_euclid(std::f64::consts::TAU))
                    / std::f64::consts::TAU
                    * GH_ORI as f64;
                let weight = (-(u * u + v * v) / (2.0 * sigma * sigma)).exp();
                trilinear(&mut hist, rbin, cbin, obin, mag * weight);
            }
        }
        if total_mag == 0.0 {
            out.push((*kp, Descriptor::Real(vec![0.0; GRAD_HIST_LEN])));
            continue;
        }
        let mut d: Vec<f32> = hist.iter().map(|&v| v as f32).collect();
        normalize(&mut d);
        for v in &mut d {
            *v = v.min(GH_CLAMP);
        }
        normalize(&mut d);
        out.push((*kp, Descriptor::Real(d)));
    }
    Ok(out)
}

fn normalize(d: &mut [f32]) {
    let norm = d.iter().map(|v| (*v as f64) * (*v as f64)).sum::<f64>().sqrt();
    if norm > 0.0 {
        for v in d.iter_mut() {
            *v = (*v as f64 / norm) as f32;
        }
    }
}

/// Distribute `value` over the eight neighboring (row, col, orientation)
/// bins; row/col contributions outside the 4x4 grid are dropped, the
/// orientation axis wraps.
fn trilinear(hist: &mut [f64; GRAD_HIST_LEN], rbin: f64, cbin: f64, obin: f64, value: f64) {
    let r0 = rbin.floor();
    let c0 = cbin.floor();
    let o0 = obin.floor();
    let (fr, fc, fo) = (rbin - r0, cbin - c0, obin - o0);
    for (dr, wr) in [(0, 1.0 - fr), (1, fr)] {
        let r = r0 as isize + dr;
        if !(0..GH_GRID as isize).contains(&r) {
            continue;
        }
        for (dc, wc) in [(0, 1.0 - fc), (1, fc)] {
            let c = c0 as isize + dc;
            if !(0..GH_GRID as isize).contains(&c) {
                continue;
            }
            for (do_, wo) in [(0, 1.0 - fo), (1, fo)] {
                let o = (o0 as isize + do_).rem_euclid(GH_ORI as isize);
                let idx = (r as usize * GH_GRID + c as usize) * GH_ORI + o as usize;
                hist[idx] += value * wr * wc * wo;
            }
        }
    }
}

/// Descriptor families addressable from the bench config.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DescriberKind {
    Brief,
    BriefSteered,
    Latch,
    GradHist,
}

impl DescriberKind {
    pub fn by_name(name: &str) -> Result<Self> {
        Ok(match name {
            "brief" => Self::Brief,
            "brief-steered" => Self::BriefSteered,
            "latch" => Self::Latch,
            "gradhist" => Self::GradHist,
            other => return Err(Error::Config(format!("unknown descriptor '{other}'"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Brief => "brief",
            Self::BriefSteered => "brief-steered",
            Self::Latch => "latch",
            Self::GradHist => "gradhist",
        }
    }

    pub fn is_binary(&self) -> bool {
        !matches!(self, Self::GradHist)
    }

    pub fn describe(
        &self,
        img: &GrayImage,
        kps: &[Keypoint],
        seed: u64,
    ) -> Result<Vec<(Keypoint, Descriptor)>> {
        match self {
            Self::Brief => describe_brief(img, kps, &brief_pattern(seed), false),
            Self::BriefSteered => describe_brief(img, kps, &brief_pattern(seed), true),
            Self::Latch => describe_latch(img, kps, &latch_pattern(seed), true),
            Self::GradHist => describe_grad_hist(img, kps),
        }
    }
}
