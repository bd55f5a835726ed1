//! Synthetic evaluation transforms with exact ground truth: gamma
//! correction, i.i.d. Gaussian noise, mask translation, and bicubic
//! rotation, plus procedural textures so the whole suite runs without an
//! external dataset.

mod texture;

pub use texture::{generate_texture, TextureKind};

use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

use crate::imgcore::{quantize_u8, warp_rotate, GrayImage};
use crate::{Error, Result};

/// Planar ground-truth transform mapping a reference-frame point `p` to the
/// test frame: `p' = scale * R(angle) * (p - c) + c + (tx, ty)`, with `c`
/// the image center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundTruth2D {
    pub angle_deg: f64,
    pub tx: f64,
    pub ty: f64,
    pub scale: f64,
    /// Image center the rotation is anchored at.
    pub cx: f64,
    pub cy: f64,
}

impl GroundTruth2D {
    pub fn identity(width: usize, height: usize) -> Self {
        let (cx, cy) = center_of(width, height);
        Self {
            angle_deg: 0.0,
            tx: 0.0,
            ty: 0.0,
            scale: 1.0,
            cx,
            cy,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.angle_deg == 0.0 && self.tx == 0.0 && self.ty == 0.0 && self.scale == 1.0
    }

    /// Map a reference-frame point into the test frame.
    pub fn apply(&self, p: (f64, f64)) -> (f64, f64) {
        let [m00, m01, m10, m11] = crate::imgcore::rot_matrix(self.angle_deg);
        let dx = p.0 - self.cx;
        let dy = p.1 - self.cy;
        (
            self.scale * (m00 * dx + m01 * dy) + self.cx + self.tx,
            self.scale * (m10 * dx + m11 * dy) + self.cy + self.ty,
        )
    }

    /// The inverse transform (test frame back to reference frame).
    pub fn inverse(&self) -> Self {
        let [m00, m01, m10, m11] = crate::imgcore::rot_matrix(-self.angle_deg);
        let s = 1.0 / self.scale;
        // p = 1/s R(-a) (p' - c - t) + c
        let tinv_x = -s * (m00 * self.tx + m01 * self.ty);
        let tinv_y = -s * (m10 * self.tx + m11 * self.ty);
        Self {
            angle_deg: -self.angle_deg,
            tx: tinv_x,
            ty: tinv_y,
            scale: s,
            cx: self.cx,
            cy: self.cy,
        }
    }
}

fn center_of(width: usize, height: usize) -> (f64, f64) {
    ((width as f64 - 1.0) / 2.0, (height as f64 - 1.0) / 2.0)
}

/// Axis-aligned rectangle mask, optionally refined by a per-pixel validity
/// bitmap (rotation borders are not axis-aligned).
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMask {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
    bitmap: Option<Bitmap>,
}

#[derive(Debug, Clone, PartialEq)]
struct Bitmap {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl RegionMask {
    pub fn rect(x0: usize, y0: usize, x1: usize, y1: usize) -> Result<Self> {
        if x0 >= x1 || y0 >= y1 {
            return Err(Error::InvalidParam(format!(
                "degenerate mask rectangle ({x0},{y0})-({x1},{y1})"
            )));
        }
        Ok(Self {
            x0,
            y0,
            x1,
            y1,
            bitmap: None,
        })
    }

    pub fn full(width: usize, height: usize) -> Self {
        Self::rect(0, 0, width, height).expect("non-empty frame")
    }

    /// Full-frame mask refined by a validity bitmap.
    pub fn from_bitmap(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::InvalidParam("bitmap size mismatch".into()));
        }
        Ok(Self {
            x0: 0,
            y0: 0,
            x1: width,
            y1: height,
            bitmap: Some(Bitmap {
                width,
                height,
                bits,
            }),
        })
    }

    /// Membership test at real coordinates (rect half-open, bitmap at the
    /// nearest pixel).
    pub fn contains(&self, x: f64, y: f64) -> bool {
        if x < self.x0 as f64 || y < self.y0 as f64 {
            return false;
        }
        if x >= self.x1 as f64 || y >= self.y1 as f64 {
            return false;
        }
        match &self.bitmap {
            None => true,
            Some(b) => {
                let xi = (x + 0.5).floor() as usize;
                let yi = (y + 0.5).floor() as usize;
                xi < b.width && yi < b.height && b.bits[yi * b.width + xi]
            }
        }
    }

    pub fn shifted(&self, dx: usize, dy: usize) -> Self {
        Self {
            x0: self.x0 + dx,
            y0: self.y0 + dy,
            x1: self.x1 + dx,
            y1: self.y1 + dy,
            bitmap: self.bitmap.clone(),
        }
    }

    pub fn rect_area(&self) -> usize {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }
}

/// One synthetic transformation kind with its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransformKind {
    Rotation,
    Translation,
    Noise,
    Gamma,
}

impl TransformKind {
    pub fn name(&self) -> &'static str {
        match self {
            TransformKind::Rotation => "rotation",
            TransformKind::Translation => "translation",
            TransformKind::Noise => "noise",
            TransformKind::Gamma => "gamma",
        }
    }
}

/// A single synthetic case: rotation angle in degrees, translation target
/// IoU, noise sigma, or gamma exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSpec {
    pub kind: TransformKind,
    pub parameter: f64,
    pub seed: u64,
}

impl TransformSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match self.kind {
            TransformKind::Rotation => (0.0..=180.0).contains(&self.parameter),
            TransformKind::Translation => (0.2..=1.0).contains(&self.parameter),
            TransformKind::Noise => (0.0..=40.0).contains(&self.parameter),
            TransformKind::Gamma => (0.1..=3.0).contains(&self.parameter),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParam(format!(
                "{} parameter {} out of range",
                self.kind.name(),
                self.parameter
            )))
        }
    }
}

/// 256-entry lookup table for `g_out = round(255 * (g_in / 255)^gamma)`.
pub fn gamma_lut(gamma: f64) -> Result<[u8; 256]> {
    if !(0.1..=3.0).contains(&gamma) {
        return Err(Error::InvalidParam(format!("gamma {gamma} out of [0.1, 3.0]")));
    }
    let mut lut = [0u8; 256];
    for (g, slot) in lut.iter_mut().enumerate() {
        let v = 255.0 * (g as f64 / 255.0).powf(gamma);
        *slot = quantize_u8(v);
    }
    Ok(lut)
}

/// Gamma-correct every pixel through the lookup table.
pub fn apply_gamma(img: &GrayImage, gamma: f64) -> Result<GrayImage> {
    let lut = gamma_lut(gamma)?;
    let data = img.pixels().iter().map(|&g| lut[g as usize]).collect();
    GrayImage::new(img.width(), img.height(), data)
}

/// Add one i.i.d. zero-mean Gaussian draw per pixel, clamp and round.
/// Identical seeds give bit-identical output.
pub fn apply_noise(img: &GrayImage, sigma: f64, seed: u64) -> Result<GrayImage> {
    if !(0.0..=40.0).contains(&sigma) {
        return Err(Error::InvalidParam(format!("noise sigma {sigma} out of [0, 40]")));
    }
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("positive sigma");
    let data = img
        .pixels()
        .iter()
        .map(|&g| quantize_u8(g as f64 + normal.sample(&mut rng)))
        .collect();
    GrayImage::new(img.width(), img.height(), data)
}

/// IoU of two equal-size rectangles offset diagonally by `d` pixels.
fn diagonal_iou(mw: usize, mh: usize, d: usize) -> f64 {
    if d >= mw || d >= mh {
        return 0.0;
    }
    let inter = ((mw - d) * (mh - d)) as f64;
    let union = (2 * mw * mh) as f64 - inter;
    inter / union
}

/// Build reference and test masks for the translation experiment.
///
/// The test mask is the reference mask shifted by the same integer offset
/// `d` along both axes toward the lower-right corner; `d` is chosen so the
/// masks' IoU comes closest to `target_iou`. Both masks are returned in
/// reference-frame coordinates, and the ground truth encodes the shift
/// (tx, ty) = (d, d).
pub fn make_translation_masks(
    width: usize,
    height: usize,
    target_iou: f64,
    mask_w: usize,
    mask_h: usize,
) -> Result<(RegionMask, RegionMask, GroundTruth2D)> {
    if !(0.2..=1.0).contains(&target_iou) {
        return Err(Error::InvalidParam(format!(
            "translation target IoU {target_iou} out of [0.2, 1.0]"
        )));
    }
    if mask_w == 0 || mask_h == 0 || mask_w > width || mask_h > height {
        return Err(Error::InvalidParam("mask does not fit in frame".into()));
    }
    // Reference mask anchored at the top-left so the shifted test mask has
    // the most headroom toward the lower-right corner.
    let x0 = 0;
    let y0 = 0;
    let ref_mask = RegionMask::rect(x0, y0, x0 + mask_w, y0 + mask_h)?;

    // IoU is monotone decreasing in d; bisect, then compare neighbors.
    let d_max = (width - mask_w).min(height - mask_h).min(mask_w.min(mask_h));
    let (mut lo, mut hi) = (0usize, d_max);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if diagonal_iou(mask_w, mask_h, mid) > target_iou {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    // lo is the smallest d with IoU <= target; the best is lo or lo-1.
    let mut best = lo.min(d_max);
    if lo > 0 {
        let above = diagonal_iou(mask_w, mask_h, lo - 1);
        let below = diagonal_iou(mask_w, mask_h, best);
        if (above - target_iou).abs() < (target_iou - below).abs() {
            best = lo - 1;
        }
    }
    if diagonal_iou(mask_w, mask_h, best) == 0.0 && target_iou > 0.0 {
        return Err(Error::InvalidParam(
            "no diagonal offset achieves a positive mask overlap".into(),
        ));
    }
    let test_mask = ref_mask.shifted(best, best);
    let mut gt = GroundTruth2D::identity(width, height);
    gt.tx = best as f64;
    gt.ty = best as f64;
    Ok((ref_mask, test_mask, gt))
}

/// Rotation case: test image, ground truth, and the per-pixel validity mask
/// of the rotated frame (pixels whose inverse-mapped source lies inside the
/// source bounds).
///
/// `warp_rotate(img, angle)` moves content with forward map R(-angle) about
/// the center, so the reference-to-test ground truth stores `-angle`.
pub fn rotation_case(img: &GrayImage, angle_deg: f64) -> Result<(GrayImage, GroundTruth2D, RegionMask)> {
    if !(0.0..=180.0).contains(&angle_deg) {
        return Err(Error::InvalidParam(format!(
            "rotation angle {angle_deg} out of [0, 180]"
        )));
    }
    let test = warp_rotate(img, angle_deg);
    let (w, h) = (img.width(), img.height());
    let mut gt = GroundTruth2D::identity(w, h);
    gt.angle_deg = -angle_deg;
    let valid = rotation_valid_mask(w, h, angle_deg)?;
    Ok((test, gt, valid))
}

/// Validity bitmap for a frame rotated by `angle_deg`: marks pixels whose
/// source sample R(angle)(p - c) + c lies inside the source bounds.
pub fn rotation_valid_mask(width: usize, height: usize, angle_deg: f64) -> Result<RegionMask> {
    let (cx, cy) = center_of(width, height);
    let [m00, m01, m10, m11] = crate::imgcore::rot_matrix(angle_deg);
    let mut bits = vec![false; width * height];
    for y in 0..height {
        let dy = y as f64 - cy;
        for x in 0..width {
            let dx = x as f64 - cx;
            let sx = m00 * dx + m01 * dy + cx;
            let sy = m10 * dx + m11 * dy + cy;
            const EPS: f64 = 1e-9;
            bits[y * width + x] = sx >= -EPS
                && sy >= -EPS
                && sx <= width as f64 - 1.0 + EPS
                && sy <= height as f64 - 1.0 + EPS;
        }
    }
    RegionMask::from_bitmap(width, height, bits)
}

/// A fully expanded synthetic evaluation case.
#[derive(Debug, Clone)]
pub struct SynthCase {
    pub spec: TransformSpec,
    pub gt: GroundTruth2D,
    /// Detection mask for the reference image, reference-frame coordinates.
    pub ref_mask: RegionMask,
    /// Detection mask for the test image, test-frame coordinates.
    pub test_mask: RegionMask,
}

impl SynthCase {
    /// Render the transformed test image for a given reference image.
    pub fn render(&self, img: &GrayImage) -> Result<GrayImage> {
        match self.spec.kind {
            TransformKind::Rotation => Ok(warp_rotate(img, self.spec.parameter)),
            TransformKind::Translation => Ok(img.clone()),
            TransformKind::Noise => apply_noise(img, self.spec.parameter, self.spec.seed),
            TransformKind::Gamma => apply_gamma(img, self.spec.parameter),
        }
    }

    /// Test mask expressed in reference-frame coordinates, as the metrics
    /// layer expects.
    pub fn test_mask_in_ref_frame(&self, width: usize, height: usize) -> Result<RegionMask> {
        match self.spec.kind {
            // Mask translation: the test rectangle already lives in the
            // shared global frame.
            TransformKind::Translation => Ok(self.test_mask.clone()),
            // Rotation: valid region seen from the reference frame is the
            // rotation by the opposite angle.
            TransformKind::Rotation => rotation_valid_mask(width, height, -self.spec.parameter),
            _ => Ok(RegionMask::full(width, height)),
        }
    }
}

/// Fraction of each frame dimension covered by the translation reference
/// mask (a centered-window share; the shifted test mask must stay in-frame).
pub const TRANSLATION_MASK_SHARE: f64 = 0.7;

/// Expand transform specs into concrete evaluation cases for a frame size.
pub fn transform_suite(specs: &[TransformSpec], width: usize, height: usize) -> Result<Vec<SynthCase>> {
    let mut cases = Vec::with_capacity(specs.len());
    for spec in specs {
        spec.validate()?;
        let case = match spec.kind {
            TransformKind::Rotation => {
                let valid = rotation_valid_mask(width, height, spec.parameter)?;
                let mut gt = GroundTruth2D::identity(width, height);
                gt.angle_deg = -spec.parameter;
                SynthCase {
                    spec: *spec,
                    gt,
                    ref_mask: RegionMask::full(width, height),
                    test_mask: valid,
                }
            }
            TransformKind::Translation => {
                let mw = (width as f64 * TRANSLATION_MASK_SHARE).round() as usize;
                let mh = (height as f64 * TRANSLATION_MASK_SHARE).round() as usize;
                let (ref_mask, test_mask, gt) =
                    make_translation_masks(width, height, spec.parameter, mw, mh)?;
                SynthCase {
                    spec: *spec,
                    gt,
                    ref_mask,
                    test_mask,
                }
            }
            TransformKind::Noise | TransformKind::Gamma => SynthCase {
                spec: *spec,
                gt: GroundTruth2D::identity(width, height),
                ref_mask: RegionMask::full(width, height),
                test_mask: RegionMask::full(width, height),
            },
        };
        cases.push(case);
    }
    Ok(cases)
}

/// The default sweep: rotation {15,45,90,135,180} deg, translation IoU
/// {0.2,0.4,0.6,0.8}, noise sigma {10,20,30,40}, gamma
/// {0.1,0.5,1.5,2.2,3.0}.
pub fn default_sweep(seed: u64) -> Vec<TransformSpec> {
    let mut specs = Vec::new();
    for &a in &[15.0, 45.0, 90.0, 135.0, 180.0] {
        specs.push(TransformSpec {
            kind: TransformKind::Rotation,
            parameter: a,
            seed,
        });
    }
    for &iou in &[0.2, 0.4, 0.6, 0.8] {
        specs.push(TransformSpec {
            kind: TransformKind::Translation,
            parameter: iou,
            seed,
        });
    }
    for (i, &s) in [10.0, 20.0, 30.0, 40.0].iter().enumerate() {
        specs.push(TransformSpec {
            kind: TransformKind::Noise,
            parameter: s,
            seed: seed.wrapping_add(i as u64 + 1),
        });
    }
    for &g in &[0.1, 0.5, 1.5, 2.2, 3.0] {
        specs.push(TransformSpec {
            kind: TransformKind::Gamma,
            parameter: g,
            seed,
        });
    }
    specs
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn gamma_lut_matches_formula_for_all_inputs() {
        for gamma in [0.1, 0.5, 1.0, 1.5, 2.2, 3.0] {
            let lut = gamma_lut(gamma).unwrap();
            for g in 0..256usize {
                let expect = (255.0 * (g as f64 / 255.0).powf(gamma) + 0.5).floor() as u8;
                assert_eq!(lut[g], expect, "gamma {gamma}, g {g}");
            }
        }
    }

    #[test]
    fn gamma_fixed_points_and_identity() {
        let img = GrayImage::new(2, 2, vec![0, 64, 128, 255]).unwrap();
        for gamma in [0.1, 0.7, 1.3, 3.0] {
            let out = apply_gamma(&img, gamma).unwrap();
            assert_eq!(out.get(1, 1), 255, "255 is a fixed point");
            assert_eq!(out.get(0, 0), 0, "0 is a fixed point");
        }
        assert_eq!(apply_gamma(&img, 1.0).unwrap(), img);
        // round(255 * (64/255)^2) = 16
        assert_eq!(apply_gamma(&img, 2.0).unwrap().get(1, 0), 16);
    }

    #[test]
    fn gamma_is_monotone_in_input() {
        for gamma in [0.1, 0.4, 1.0, 2.0, 3.0] {
            let lut = gamma_lut(gamma).unwrap();
            for g in 1..256 {
                assert!(lut[g] >= lut[g - 1], "gamma {gamma} at {g}");
            }
        }
    }

    #[test]
    fn gamma_rejects_out_of_range() {
        let img = GrayImage::filled(2, 2, 10);
        assert!(apply_gamma(&img, 0.05).is_err());
        assert!(apply_gamma(&img, 3.5).is_err());
    }

    #[test]
    fn noise_zero_sigma_is_identity() {
        let img = GrayImage::filled(5, 5, 100);
        assert_eq!(apply_noise(&img, 0.0, 9).unwrap(), img);
    }

    #[test]
    fn noise_is_seed_deterministic() {
        let img = GrayImage::filled(32, 32, 128);
        let a = apply_noise(&img, 15.0, 42).unwrap();
        let b = apply_noise(&img, 15.0, 42).unwrap();
        let c = apply_noise(&img, 15.0, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn noise_statistics_match_parameters() {
        let img = GrayImage::filled(1000, 1000, 128);
        let noisy = apply_noise(&img, 10.0, 7).unwrap();
        let n = noisy.pixels().len() as f64;
        let mean: f64 = noisy.pixels().iter().map(|&v| v as f64).sum::<f64>() / n;
        let var: f64 = noisy
            .pixels()
            .iter()
            .map(|&v| (v as f64 - mean).powi(2))
            .sum::<f64>()
            / n;
        assert!((mean - 128.0).abs() < 0.1, "mean {mean}");
        assert!((var.sqrt() - 10.0).abs() < 0.2, "std {}", var.sqrt());
    }

    #[test]
    fn noise_rejects_out_of_range_sigma() {
        let img = GrayImage::filled(2, 2, 0);
        assert!(apply_noise(&img, 41.0, 0).is_err());
        assert!(apply_noise(&img, -1.0, 0).is_err());
    }

    #[test]
    fn translation_masks_identity_at_iou_one() {
        let (r, t, gt) = make_translation_masks(300, 300, 1.0, 100, 100).unwrap();
        assert_eq!(r, t);
        assert_eq!((gt.tx, gt.ty), (0.0, 0.0));
    }

    #[test]
    fn translation_offsets_match_closed_form_sweep() {
        // Offset minimizing |IoU - target| over all integer d, by sweep.
        let sweep_best = |s: usize, target: f64| -> usize {
            (0..=s)
                .min_by(|&a, &b| {
                    let fa = (diagonal_iou(s, s, a) - target).abs();
                    let fb = (diagonal_iou(s, s, b) - target).abs();
                    fa.partial_cmp(&fb).unwrap()
                })
                .unwrap()
        };
        for &(target, expect) in &[(0.5, 18usize), (0.2, 42usize)] {
            assert_eq!(sweep_best(100, target), expect, "oracle at {target}");
            let (_, t, gt) = make_translation_masks(300, 300, target, 100, 100).unwrap();
            assert_eq!(gt.tx as usize, expect, "target {target}");
            assert_eq!(t.x0, expect);
        }
        // Bisection agrees with the sweep across the whole valid range.
        for i in 0..=16 {
            let target = 0.2 + 0.05 * i as f64;
            let (_, _, gt) = make_translation_masks(400, 400, target, 128, 128).unwrap();
            assert_eq!(gt.tx as usize, sweep_best(128, target), "target {target}");
        }
    }

    #[test]
    fn translation_rejects_oversized_mask() {
        assert!(make_translation_masks(50, 50, 0.5, 60, 60).is_err());
    }

    #[test]
    fn ground_truth_inverse_round_trip() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let gt = GroundTruth2D {
            angle_deg: 37.0,
            tx: 12.5,
            ty: -4.0,
            scale: 1.05,
            cx: 63.5,
            cy: 63.5,
        };
        let inv = gt.inverse();
        for _ in 0..1000 {
            let p = (rng.gen_range(-100.0..200.0), rng.gen_range(-100.0..200.0));
            let q = inv.apply(gt.apply(p));
            assert!((q.0 - p.0).abs() < 1e-9 && (q.1 - p.1).abs() < 1e-9);
        }
    }

    #[test]
    fn rotation_case_identity_angle() {
        let img = GrayImage::filled(16, 16, 77);
        let (test, gt, valid) = rotation_case(&img, 0.0).unwrap();
        assert_eq!(test, img);
        assert!(gt.is_identity());
        for y in 0..16 {
            for x in 0..16 {
                assert!(valid.contains(x as f64, y as f64));
            }
        }
    }

    #[test]
    fn rotation_case_maps_corner_at_90_degrees() {
        let img = GrayImage::filled(33, 33, 1);
        let (_, gt, valid) = rotation_case(&img, 90.0).unwrap();
        let p = gt.apply((0.0, 0.0));
        assert!((p.0 - 0.0).abs() < 1e-9 && (p.1 - 32.0).abs() < 1e-9, "{p:?}");
        // Square frame, quarter turn: every pixel valid.
        for y in 0..33 {
            for x in 0..33 {
                assert!(valid.contains(x as f64, y as f64));
            }
        }
    }

    #[test]
    fn rotation_case_45_excludes_corners() {
        let img = GrayImage::filled(64, 64, 1);
        let (_, _, valid) = rotation_case(&img, 45.0).unwrap();
        assert!(!valid.contains(0.0, 0.0));
        assert!(!valid.contains(63.0, 63.0));
        assert!(valid.contains(31.5, 31.5));
    }

    #[test]
    fn suite_default_sweep_has_18_cases() {
        let specs = default_sweep(1);
        assert_eq!(specs.len(), 18);
        let cases = transform_suite(&specs, 256, 256).unwrap();
        assert_eq!(cases.len(), 18);
        let kinds: std::collections::HashSet<&str> =
            cases.iter().map(|c| c.spec.kind.name()).collect();
        assert_eq!(kinds.len(), 4);
    }

    #[test]
    fn suite_empty_list_is_empty() {
        assert!(transform_suite(&[], 64, 64).unwrap().is_empty());
    }

    #[test]
    fn suite_translation_case_carries_diagonal_shift() {
        let specs = [TransformSpec {
            kind: TransformKind::Translation,
            parameter: 0.6,
            seed: 0,
        }];
        let cases = transform_suite(&specs, 300, 300).unwrap();
        let gt = cases[0].gt;
        assert_eq!(gt.angle_deg, 0.0);
        assert_eq!(gt.tx, gt.ty);
        assert!(gt.tx > 0.0);
    }
}
